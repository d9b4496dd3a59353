#pragma once

#include <stdexcept>
#include <string>

namespace rantor {

enum class Errc {
    ok = 0,
    not_unimodular,
    not_hyperbolic,
    cones_overlap,
    cone_not_invariant,
    no_expansion,
    no_contraction,
    eigendirection_on_boundary,
    not_sign_definite,
    cap_exceeded,
    not_in_cone,
    zero_vector,
    empty_intersection,
    aliasing_risk,
    word_too_short,
    invalid_probs,
    invalid_argument,
    config_error,
    io_error,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
  public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    Errc code() const { return code_; }

  private:
    Errc code_;
};

}  // namespace rantor
