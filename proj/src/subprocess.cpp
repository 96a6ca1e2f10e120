#include "mdlad/subprocess.hpp"

#include <cerrno>
#include <chrono>
#include <csignal>
#include <cstring>
#include <thread>

#include <fcntl.h>
#include <sys/wait.h>
#include <unistd.h>

namespace mdlad {

namespace {

void drain_pipe(int fd, std::string& sink) {
    char buf[4096];
    for (;;) {
        const ssize_t got = ::read(fd, buf, sizeof(buf));
        if (got > 0) {
            sink.append(buf, static_cast<std::size_t>(got));
        } else if (got == 0 || (got < 0 && errno != EAGAIN && errno != EINTR)) {
            return;
        } else {
            return;  // would block; caller polls again later
        }
    }
}

}  // namespace

ProcessResult run_process(const std::vector<std::string>& argv,
                          const std::string& workdir, double timeout_seconds) {
    if (argv.empty()) {
        throw std::runtime_error("run_process: empty argv");
    }
    int out_pipe[2];
    if (::pipe(out_pipe) != 0) {
        throw std::runtime_error("run_process: pipe failed");
    }

    const pid_t pid = ::fork();
    if (pid < 0) {
        ::close(out_pipe[0]);
        ::close(out_pipe[1]);
        throw std::runtime_error("run_process: fork failed");
    }
    if (pid == 0) {
        ::close(out_pipe[0]);
        ::dup2(out_pipe[1], STDOUT_FILENO);
        ::dup2(out_pipe[1], STDERR_FILENO);
        ::close(out_pipe[1]);
        if (!workdir.empty() && ::chdir(workdir.c_str()) != 0) {
            ::_exit(127);
        }
        std::vector<char*> cargv;
        cargv.reserve(argv.size() + 1);
        for (const auto& a : argv) {
            cargv.push_back(const_cast<char*>(a.c_str()));
        }
        cargv.push_back(nullptr);
        ::execvp(cargv[0], cargv.data());
        const char* msg = "exec failed: ";
        auto ignore = ::write(STDERR_FILENO, msg, std::strlen(msg));
        ignore = ::write(STDERR_FILENO, argv[0].c_str(), argv[0].size());
        (void)ignore;
        ::_exit(127);
    }

    ::close(out_pipe[1]);
    ::fcntl(out_pipe[0], F_SETFL, O_NONBLOCK);

    ProcessResult result;
    const auto deadline = std::chrono::steady_clock::now() +
                          std::chrono::duration<double>(timeout_seconds);
    for (;;) {
        drain_pipe(out_pipe[0], result.output);
        int status = 0;
        const pid_t done = ::waitpid(pid, &status, WNOHANG);
        if (done == pid) {
            drain_pipe(out_pipe[0], result.output);
            ::close(out_pipe[0]);
            if (WIFEXITED(status)) {
                result.exit_code = WEXITSTATUS(status);
            } else if (WIFSIGNALED(status)) {
                result.exit_code = 128 + WTERMSIG(status);
            }
            return result;
        }
        if (std::chrono::steady_clock::now() >= deadline) {
            ::kill(pid, SIGKILL);
            ::waitpid(pid, nullptr, 0);
            ::close(out_pipe[0]);
            throw SubprocessTimeout("process '" + argv[0] + "' timed out after " +
                                    std::to_string(timeout_seconds) + "s");
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(5));
    }
}

}  // namespace mdlad
