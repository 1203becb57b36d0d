#pragma once

namespace lolo {

/// Command-line entry point (subcommands: build-map, run, eval, synth).
/// Returns 0 on success, 1 on usage errors, 2 on runtime errors.
int cli(int argc, const char* const* argv);

}  // namespace lolo
