#ifndef RLPN_ERROR_HPP
#define RLPN_ERROR_HPP

#include <stdexcept>
#include <string>

namespace rlpn {

enum class errc {
    invalid_argument = 1,
    parse,
    factorization_invalid,
    factors_not_coprime,
    component_too_large,
    dimension_too_large,
    rank_deficient,
    batch_too_large,
    infeasible,
    inconclusive,
    io,
    internal,
};

class Error : public std::runtime_error {
  public:
    Error(errc c, const std::string& msg) : std::runtime_error(msg), code_(c) {}
    errc code() const { return code_; }

  private:
    errc code_;
};

[[noreturn]] inline void fail(errc c, const std::string& msg) { throw Error(c, msg); }

inline void require(bool ok, errc c, const std::string& msg) {
    if (!ok) fail(c, msg);
}

} // namespace rlpn

#endif
