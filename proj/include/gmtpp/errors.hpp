#pragma once

#include <stdexcept>
#include <string>

namespace gmtpp {

/// Failure categories surfaced by the library. Verifier operations return
/// reports instead of throwing; these cover contract violations.
enum class errc {
    not_prime,
    reducible_modulus,
    degree_too_small,
    division_by_zero,
    level_mismatch,
    subfield_violation,
    log_of_zero,
    zero_input,
    wrong_length,
    not_a_basis,
    zero_vector,
    bad_params,
    bad_r,
    not_bijection,
    not_permutation_of_fq,
    wrong_n,
    index_out_of_range,
    not_in_mu,
    zero_poly,
    nonzero_constant_term,
    report_violation,
    parse_error,
    field_too_large,
    internal_check,
};

inline const char* errc_name(errc c) {
    switch (c) {
        case errc::not_prime: return "NotPrime";
        case errc::reducible_modulus: return "ReducibleModulus";
        case errc::degree_too_small: return "DegreeTooSmall";
        case errc::division_by_zero: return "DivisionByZero";
        case errc::level_mismatch: return "LevelMismatch";
        case errc::subfield_violation: return "InternalSubfieldViolation";
        case errc::log_of_zero: return "LogOfZero";
        case errc::zero_input: return "ZeroInput";
        case errc::wrong_length: return "WrongLength";
        case errc::not_a_basis: return "NotABasis";
        case errc::zero_vector: return "ZeroVector";
        case errc::bad_params: return "BadParams";
        case errc::bad_r: return "BadR";
        case errc::not_bijection: return "NotBijection";
        case errc::not_permutation_of_fq: return "NotPermutationOfFq";
        case errc::wrong_n: return "WrongN";
        case errc::index_out_of_range: return "IndexOutOfRange";
        case errc::not_in_mu: return "NotInMu";
        case errc::zero_poly: return "ZeroPoly";
        case errc::nonzero_constant_term: return "NonzeroConstantTerm";
        case errc::report_violation: return "ReportsViolation";
        case errc::parse_error: return "ParseError";
        case errc::field_too_large: return "FieldTooLarge";
        case errc::internal_check: return "InternalCheck";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    errc code() const noexcept { return code_; }

private:
    errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw Error(code, what); }

inline void check(bool ok, errc code, const std::string& what) {
    if (!ok) fail(code, what);
}

} // namespace gmtpp
