#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "harness.hpp"

using namespace lolo;

namespace {

std::mt19937_64 test_rng(3);

Point3 random_point(double span) {
  std::uniform_real_distribution<double> d(-span, span);
  return Point3(d(test_rng), d(test_rng), d(test_rng));
}

RigidTransform random_transform(double span = 3.0) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  Point3 axis(d(test_rng), d(test_rng), d(test_rng));
  if (axis.norm() < 1e-6) axis = Point3::UnitZ();
  std::uniform_real_distribution<double> a(-M_PI, M_PI);
  return RigidTransform(Eigen::AngleAxisd(a(test_rng), axis.normalized()).toRotationMatrix(),
                        random_point(span));
}

MatchCandidate candidate_with_offset(const Point3& offset) {
  MatchCandidate c;
  c.offset = offset;
  return c;
}

}  // namespace

TEST_CASE("LocalMap with capacity 1 holds only the latest transformed scan") {
  LocalMap map(1);
  PointCloud scan;
  scan.add(1, 0, 0);
  map.add(scan, RigidTransform::identity());
  PointCloud scan2;
  scan2.add(0, 1, 0);
  const RigidTransform pose = RigidTransform::from_translation(Point3(10, 0, 0));
  map.add(scan2, pose);
  REQUIRE(map.densified().size() == 1);
  CHECK((map.densified().points[0] - Point3(10, 1, 0)).norm() < 1e-12);
}

TEST_CASE("LocalMap union semantics: duplicates are kept") {
  LocalMap map(2);
  PointCloud scan;
  for (int i = 0; i < 5; ++i) scan.add(i, 0, 0);
  map.add(scan, RigidTransform::identity());
  map.add(scan, RigidTransform::identity());
  CHECK(map.densified().size() == 10);
}

TEST_CASE("LocalMap densified cloud equals the transform-and-concatenate oracle") {
  LocalMap map(5);
  std::vector<PointCloud> scans;
  std::vector<RigidTransform> poses;
  for (int k = 0; k < 5; ++k) {
    PointCloud scan;
    for (int i = 0; i < 20; ++i) scan.add(random_point(4.0));
    const RigidTransform pose = random_transform();
    map.add(scan, pose);
    scans.push_back(scan);
    poses.push_back(pose);
  }
  PointCloud oracle;
  for (std::size_t k = 0; k < scans.size(); ++k) {
    oracle.append(transform_cloud(scans[k], poses[k]));
  }
  REQUIRE(map.densified().size() == oracle.size());
  for (std::size_t i = 0; i < oracle.size(); ++i) {
    CHECK((map.densified().points[i] - oracle.points[i]).norm() < 1e-9);
  }
}

TEST_CASE("LocalMap evicts beyond capacity and validates inputs") {
  LocalMap map(2);
  for (int k = 0; k < 4; ++k) {
    PointCloud scan;
    scan.add(k, 0, 0);
    map.add(scan, RigidTransform::identity());
  }
  CHECK(map.size() == 2);
  CHECK(map.densified().points[0].x() == 2.0);
  CHECK_THROWS_AS(LocalMap(0), InvalidParameterError);
}

TEST_CASE("prior_transform of a single inlier is that offset with identity rotation") {
  const auto prior = prior_transform({candidate_with_offset(Point3(1, 0, 0))});
  CHECK((prior.translation() - Point3(1, 0, 0)).norm() == 0.0);
  CHECK((prior.rotation() - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("prior_transform averages two offsets") {
  const auto prior = prior_transform(
      {candidate_with_offset(Point3(1, 0, 0)), candidate_with_offset(Point3(3, 0, 0))});
  CHECK((prior.translation() - Point3(2, 0, 0)).norm() < 1e-15);
}

TEST_CASE("prior_transform equals the accumulate-and-divide oracle, rotation exactly identity") {
  std::vector<MatchCandidate> inliers;
  Point3 sum = Point3::Zero();
  for (int i = 0; i < 20; ++i) {
    const Point3 offset = random_point(5.0);
    inliers.push_back(candidate_with_offset(offset));
    sum += offset;
  }
  const auto prior = prior_transform(inliers);
  CHECK((prior.translation() - sum / 20.0).norm() < 1e-12);
  CHECK((prior.rotation() - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(prior_transform({}), InvalidInputError);
}

TEST_CASE("refine_with_icp is identity when the prior already aligns the clouds") {
  const auto scenario = harness::half_visible_scenario(1);
  // Perfect prior: exactly undo the drift, so the visible half coincides
  // with its counterpart in the target cloud.
  const RigidTransform perfect = scenario.drift.inverse();
  const RigidTransform icp =
      refine_with_icp(scenario.local_points, scenario.target_points, perfect, {});
  CHECK((icp.rotation() - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() < 1e-6);
  CHECK(icp.translation().norm() < 1e-6);
}

TEST_CASE("refine_with_icp reduces surface RMSE in the half-visible scenario") {
  int improved = 0;
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const auto s = harness::half_visible_scenario(seed);
    const SpatialIndex target_index(s.target_points);
    const RigidTransform icp = refine_with_icp(s.local_points, s.target_points, s.prior, {});
    const auto [w_u, w_t] = compose_update(RigidTransform::identity(), s.prior, icp);
    const double before = harness::surface_rmse(s.local_points, target_index, s.prior);
    const double after = harness::surface_rmse(s.local_points, target_index, w_u);
    CHECK(after <= before + 1e-12);
    if (after < before) ++improved;
  }
  CHECK(improved >= 20);  // the shifted-centroid prior leaves real error to remove
}

TEST_CASE("refine_with_icp with an empty target propagates no-overlap") {
  const auto s = harness::half_visible_scenario(2);
  CHECK_THROWS_AS(refine_with_icp(s.local_points, PointCloud{}, s.prior, {}), NoOverlapError);
}

TEST_CASE("compose_update identity parts leave the odometry pose untouched") {
  const RigidTransform w_e = random_transform();
  const auto [w_u, w_t] =
      compose_update(w_e, RigidTransform::identity(), RigidTransform::identity());
  CHECK((w_u.matrix() - Eigen::Matrix4d::Identity()).cwiseAbs().maxCoeff() == 0.0);
  CHECK((w_t.matrix() - w_e.matrix()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("compose_update hand-checked translation case") {
  const auto [w_u, w_t] = compose_update(RigidTransform::identity(),
                                         RigidTransform::from_translation(Point3(2, 0, 0)),
                                         RigidTransform::from_translation(Point3(0.1, 0, 0)));
  CHECK((w_t.translation() - Point3(1.9, 0, 0)).norm() < 1e-15);
}

TEST_CASE("compose_update equals the homogeneous matrix-product oracle") {
  for (int trial = 0; trial < 100; ++trial) {
    const RigidTransform w_e = random_transform();
    const RigidTransform w_p = RigidTransform::from_translation(random_point(4.0));
    const RigidTransform w_icp = random_transform(0.5);
    const auto [w_u, w_t] = compose_update(w_e, w_p, w_icp);
    const Eigen::Matrix4d want_u = w_p.matrix() * w_icp.matrix().inverse();
    const Eigen::Matrix4d want_t = want_u * w_e.matrix();
    CHECK((w_u.matrix() - want_u).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((w_t.matrix() - want_t).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("localize: self-localization on a map-carved local cloud is near identity") {
  const harness::TownFixture town(31, 16, 2);
  const RigidTransform truth = town.scene.ground_truth[1].pose;

  // Carve the local cloud verbatim from the target map around the pose.
  PointCloud carved;
  for (const Point3& p : town.scene.target_map.points) {
    if ((p - truth.translation()).norm() <= 30.0) carved.add(p);
  }
  LocalMap local(1);
  local.add(transform_cloud(carved, truth.inverse()), truth);

  const LocalizationAttempt attempt = localize(local, town.db, truth, town.config);
  REQUIRE(attempt.success);
  CHECK(attempt.update->update.translation().norm() < 1e-3);
  CHECK(attempt.accepted >= 3);
  CHECK(attempt.candidates == attempt.filtered_out + attempt.accepted);
}

TEST_CASE("localize: planted odometry offset is recovered within 0.1 m") {
  const harness::TownFixture town(32, 20, 30);
  const RigidTransform drift = RigidTransform::from_translation(Point3(2, 1, 0));
  const int last = 29;
  const LocalMap local = town.drifted_local_map(10, last, drift);
  const RigidTransform w_e = drift * town.scene.ground_truth[last].pose;

  const LocalizationAttempt attempt = localize(local, town.db, w_e, town.config);
  REQUIRE(attempt.success);
  const RigidTransform w_t = attempt.update->update * w_e;
  const RigidTransform truth = town.scene.ground_truth[last].pose;
  CHECK((w_t.translation() - truth.translation()).norm() < 0.1);
}

TEST_CASE("localize: pose gated into an empty map region yields no localization") {
  const harness::TownFixture town(33, 12, 2);
  LocalMap local(1);
  local.add(town.scene.scans[0], town.scene.ground_truth[0].pose);
  const RigidTransform far_away = RigidTransform::from_translation(Point3(5000, 5000, 0));
  const LocalizationAttempt attempt = localize(local, town.db, far_away, town.config);
  CHECK_FALSE(attempt.success);
  CHECK_FALSE(attempt.update.has_value());
  CHECK(attempt.candidates == 0);
}

TEST_CASE("localize error reduction over planted offsets (100 seeds)") {
  const harness::TownFixture town(34, 20, 30);
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> mag(0.5, 3.0);
  std::uniform_real_distribution<double> dir(0.0, 2.0 * M_PI);
  const int last = 29;
  int reduced = 0;
  for (int seed = 0; seed < 100; ++seed) {
    const double m = mag(rng), a = dir(rng);
    const RigidTransform drift =
        RigidTransform::from_translation(Point3(m * std::cos(a), m * std::sin(a), 0.1));
    const LocalMap local = town.drifted_local_map(10, last, drift);
    const RigidTransform w_e = drift * town.scene.ground_truth[last].pose;
    const LocalizationAttempt attempt = localize(local, town.db, w_e, town.config);
    REQUIRE(attempt.success);
    const RigidTransform w_t = attempt.update->update * w_e;
    const Point3 truth_t = town.scene.ground_truth[last].pose.translation();
    const double err_before = (w_e.translation() - truth_t).norm();
    const double err_after = (w_t.translation() - truth_t).norm();
    if (err_after < err_before) ++reduced;
  }
  CHECK(reduced == 100);
}

TEST_CASE("localize is deterministic for a fixed seed") {
  const harness::TownFixture town(35, 14, 12);
  const RigidTransform drift = RigidTransform::from_translation(Point3(1, -0.5, 0));
  const LocalMap local = town.drifted_local_map(5, 11, drift);
  const RigidTransform w_e = drift * town.scene.ground_truth[11].pose;
  const LocalizationAttempt a = localize(local, town.db, w_e, town.config);
  const LocalizationAttempt b = localize(local, town.db, w_e, town.config);
  REQUIRE(a.success == b.success);
  if (a.success) {
    CHECK((a.update->update.matrix() - b.update->update.matrix()).norm() == 0.0);
    CHECK(a.candidates == b.candidates);
    CHECK(a.accepted == b.accepted);
  }
}
