#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace pclab {

using Int = mpz_class;
using Rat = mpq_class;

// Domain error with a stable machine-readable code (ExceptionalSurface, NotBinding, ...).
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& what)
        : std::runtime_error(what), code_(std::move(code)) {}
    const std::string& code() const { return code_; }

private:
    std::string code_;
};

[[noreturn]] inline void fail(const std::string& code, const std::string& what) {
    throw Error(code, what);
}

// A crossing word: sequence of triangle sides, each meaning "leave tri(s) through side s".
using Word = std::vector<int>;

inline bool fits_long(const Int& x) { return x.fits_slong_p(); }

std::string to_string(const Int& x);

}  // namespace pclab
