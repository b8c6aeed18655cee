#include "scrub/process.hpp"

#include <fcntl.h>
#include <poll.h>
#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <cerrno>
#include <cstdlib>
#include <cstring>

#include "scrub/error.hpp"

namespace scrub {

namespace {

void drain(int fd, std::string& sink, bool& open) {
    std::array<char, 1 << 16> buf{};
    const ssize_t n = ::read(fd, buf.data(), buf.size());
    if (n > 0) {
        sink.append(buf.data(), static_cast<std::size_t>(n));
    } else if (n == 0 || (errno != EINTR && errno != EAGAIN)) {
        open = false;
    }
}

}  // namespace

ProcessResult run_process(const std::vector<std::string>& argv, const ProcessOptions& options) {
    if (argv.empty()) throw Error(ErrorCode::BACKEND_UNAVAILABLE, "empty command");

    int out_pipe[2];
    int err_pipe[2];
    int exec_pipe[2];
    if (::pipe(out_pipe) != 0 || ::pipe(err_pipe) != 0 || ::pipe2(exec_pipe, O_CLOEXEC) != 0) {
        throw Error(ErrorCode::IO_ERROR, std::string("pipe: ") + std::strerror(errno));
    }

    std::vector<char*> args;
    for (const auto& a : argv) args.push_back(const_cast<char*>(a.c_str()));
    args.push_back(nullptr);

    const pid_t pid = ::fork();
    if (pid < 0) throw Error(ErrorCode::IO_ERROR, std::string("fork: ") + std::strerror(errno));
    if (pid == 0) {
        const char* in_path = options.stdin_file ? options.stdin_file->c_str() : "/dev/null";
        const int in_fd = ::open(in_path, O_RDONLY);
        if (in_fd >= 0) ::dup2(in_fd, STDIN_FILENO);
        ::dup2(out_pipe[1], STDOUT_FILENO);
        ::dup2(err_pipe[1], STDERR_FILENO);
        ::close(out_pipe[0]);
        ::close(err_pipe[0]);
        ::close(exec_pipe[0]);
        if (options.cwd && ::chdir(options.cwd->c_str()) != 0) _exit(127);
        for (const auto& [k, v] : options.env) ::setenv(k.c_str(), v.c_str(), 1);
        ::execvp(args[0], args.data());
        const int e = errno;
        [[maybe_unused]] auto w = ::write(exec_pipe[1], &e, sizeof e);
        _exit(127);
    }

    ::close(out_pipe[1]);
    ::close(err_pipe[1]);
    ::close(exec_pipe[1]);

    int exec_errno = 0;
    const bool exec_failed = ::read(exec_pipe[0], &exec_errno, sizeof exec_errno) == sizeof exec_errno;
    ::close(exec_pipe[0]);

    ProcessResult result;
    bool out_open = true;
    bool err_open = true;
    while (out_open || err_open) {
        std::array<pollfd, 2> fds{{{out_pipe[0], POLLIN, 0}, {err_pipe[0], POLLIN, 0}}};
        if (!out_open) fds[0].fd = -1;
        if (!err_open) fds[1].fd = -1;
        if (::poll(fds.data(), fds.size(), -1) < 0) {
            if (errno == EINTR) continue;
            break;
        }
        if (out_open && (fds[0].revents & (POLLIN | POLLHUP | POLLERR))) drain(out_pipe[0], result.out, out_open);
        if (err_open && (fds[1].revents & (POLLIN | POLLHUP | POLLERR))) drain(err_pipe[0], result.err, err_open);
    }
    ::close(out_pipe[0]);
    ::close(err_pipe[0]);

    int status = 0;
    while (::waitpid(pid, &status, 0) < 0 && errno == EINTR) {
    }
    if (exec_failed) {
        throw Error(ErrorCode::BACKEND_UNAVAILABLE,
                    "cannot execute '" + argv[0] + "': " + std::strerror(exec_errno));
    }
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : 128 + WTERMSIG(status);
    return result;
}

TempDir::TempDir(const std::string& prefix) {
    std::string templ = (std::filesystem::temp_directory_path() / (prefix + "-XXXXXX")).string();
    if (::mkdtemp(templ.data()) == nullptr) {
        throw Error(ErrorCode::IO_ERROR, std::string("mkdtemp: ") + std::strerror(errno));
    }
    path_ = templ;
}

TempDir::~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
}

}  // namespace scrub
