#pragma once

#include <iosfwd>

namespace enrich {

/// Command-line entry point. Returns 0 on success, 1 on usage errors and 2
/// on runtime errors.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace enrich
