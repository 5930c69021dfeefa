#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace vtsynth {

/// Process exit codes, one per error class.
enum ExitCode : int {
    kExitOk = 0,
    kExitInternal = 1,
    kExitUsage = 2,
    kExitInput = 3,     // model, trace, formula or verdict text did not parse
    kExitPipeline = 4,  // stage precondition or synthesis failure
    kExitArtifact = 5,  // malformed monitor artifact
    kExitIo = 6,        // file could not be read or written
};

/// Entry point of the `vtsynth` tool. Reads traces from `in` when asked to use
/// stdin; never touches the process-wide streams.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

/// Lowercase hex SHA-256.
std::string sha256_hex(std::string_view bytes);

}  // namespace vtsynth
