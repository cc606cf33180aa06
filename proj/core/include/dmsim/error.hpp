#ifndef DMSIM_ERROR_HPP
#define DMSIM_ERROR_HPP

#include <cstdio>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace dmsim {

// Bad user input: trace lines, config files, CLI values. Exit code 2 territory.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed trace / reference file content.
struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

// Runtime failures (I/O, OOM at run level that must stop the run).
struct RunError : std::runtime_error {
    explicit RunError(const std::string& msg) : std::runtime_error(msg) {}
};

[[noreturn]] inline void check_failed(const char* expr, const char* file, int line,
                                      const std::string& msg) {
    std::fprintf(stderr, "dmsim: invariant violated: %s\n  at %s:%d\n  %s\n", expr, file, line,
                 msg.c_str());
    std::abort();
}

} // namespace dmsim

// Internal invariant checks. These guard engine/module contracts (causality,
// valid ids, mapped pages). A failure is a simulator bug, so abort with
// diagnostics instead of throwing.
#define DMSIM_CHECK(cond, msg)                                                                     \
    do {                                                                                           \
        if (!(cond)) ::dmsim::check_failed(#cond, __FILE__, __LINE__, (msg));                      \
    } while (0)

#endif
