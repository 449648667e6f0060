#pragma once

#include <stdexcept>
#include <string>

namespace medsev {

// Runtime failure with a human-readable cause (bad input file, contract
// violation at a module boundary, numerical breakdown with guidance).
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {
[[noreturn]] inline void dcheck_fail(const char* expr, const std::string& msg) {
    throw std::logic_error(std::string("debug check failed: ") + expr +
                           (msg.empty() ? "" : (" — " + msg)));
}
} // namespace detail

} // namespace medsev

// Debug contract check. Compiled in by default (MEDSEV_DCHECKS=ON); throws
// std::logic_error so precondition violations are observable in tests.
#if MEDSEV_DCHECKS_ENABLED
#define MEDSEV_DCHECK(expr, msg)                                  \
    do {                                                          \
        if (!(expr)) ::medsev::detail::dcheck_fail(#expr, (msg)); \
    } while (0)
#else
#define MEDSEV_DCHECK(expr, msg) \
    do {                         \
    } while (0)
#endif
