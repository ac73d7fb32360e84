#pragma once

#include <stdexcept>
#include <string>

namespace rdmap {

// Every failure mode the library reports deliberately.  Callers that want to
// branch on the cause catch rdmap::Error and switch on code().
enum class Errc {
    dimension_mismatch,
    not_hermitian,
    not_psd,
    trace_not_one,
    no_convergence,
    negative_eigenvalue,
    not_commuting_family,
    bad_weights,
    not_trace_preserving,
    trace_increasing,
    gamma_out_of_range,
    not_unitary,
    bad_ket,
    constraint_violated,
    not_incoherent,
    not_a_group,
    input_not_free,
    not_linear_destroyer,
    bad_file,
    bad_argument,
};

inline const char* errc_name(Errc c) {
    switch (c) {
        case Errc::dimension_mismatch:    return "dimension_mismatch";
        case Errc::not_hermitian:         return "not_hermitian";
        case Errc::not_psd:               return "not_psd";
        case Errc::trace_not_one:         return "trace_not_one";
        case Errc::no_convergence:        return "no_convergence";
        case Errc::negative_eigenvalue:   return "negative_eigenvalue";
        case Errc::not_commuting_family:  return "not_commuting_family";
        case Errc::bad_weights:           return "bad_weights";
        case Errc::not_trace_preserving:  return "not_trace_preserving";
        case Errc::trace_increasing:      return "trace_increasing";
        case Errc::gamma_out_of_range:    return "gamma_out_of_range";
        case Errc::not_unitary:           return "not_unitary";
        case Errc::bad_ket:               return "bad_ket";
        case Errc::constraint_violated:   return "constraint_violated";
        case Errc::not_incoherent:        return "not_incoherent";
        case Errc::not_a_group:           return "not_a_group";
        case Errc::input_not_free:        return "input_not_free";
        case Errc::not_linear_destroyer:  return "not_linear_destroyer";
        case Errc::bad_file:              return "bad_file";
        case Errc::bad_argument:          return "bad_argument";
    }
    return "unknown";
}

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

}  // namespace rdmap
