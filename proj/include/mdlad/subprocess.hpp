#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace mdlad {

struct ProcessResult {
    int exit_code{0};
    std::string output;  // combined stdout + stderr
};

class SubprocessTimeout : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Runs argv[0] with the given arguments, working directory (empty = inherit)
/// and wall-clock timeout. stdout and stderr are captured into one stream.
/// Throws SubprocessTimeout when the deadline passes (the child is killed),
/// std::runtime_error when the process cannot be spawned.
ProcessResult run_process(const std::vector<std::string>& argv,
                          const std::string& workdir, double timeout_seconds);

}  // namespace mdlad
