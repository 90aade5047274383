#pragma once

namespace gaplab::cli {

/// Entry point behind the gaplab binary.  Returns 0 on success, 1 on
/// validation errors, 2 on solver failures.
int run(int argc, const char* const* argv);

}  // namespace gaplab::cli
