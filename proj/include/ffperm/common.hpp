// Shared error type, deterministic RNG, and a small static-chunk parallel loop.
#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace ffperm {

enum class errc {
    not_prime,
    reducible_modulus,
    field_too_large,
    division_by_zero,
    cubing_not_bijective,
    field_mismatch,
    arity_mismatch,
    budget_exceeded,
    singular_matrix,
    illegal_shift_dependency,
    even_characteristic,
    odd_characteristic,
    not_normalized,
    zero_denominator,
    zero_form,
    precondition_violated,
    wrong_residue_class,
    wrong_characteristic,
    even_degree_even_char,
    char_three,
    classifier_oracle_mismatch,
    parse_error,
    bad_argument,
};

inline const char* errc_name(errc c) {
    switch (c) {
        case errc::not_prime: return "NotPrime";
        case errc::reducible_modulus: return "ReducibleModulus";
        case errc::field_too_large: return "FieldTooLarge";
        case errc::division_by_zero: return "DivisionByZero";
        case errc::cubing_not_bijective: return "CubingNotBijective";
        case errc::field_mismatch: return "FieldMismatch";
        case errc::arity_mismatch: return "ArityMismatch";
        case errc::budget_exceeded: return "BudgetExceeded";
        case errc::singular_matrix: return "SingularMatrix";
        case errc::illegal_shift_dependency: return "IllegalShiftDependency";
        case errc::even_characteristic: return "EvenCharacteristic";
        case errc::odd_characteristic: return "OddCharacteristic";
        case errc::not_normalized: return "NotNormalized";
        case errc::zero_denominator: return "ZeroDenominator";
        case errc::zero_form: return "ZeroForm";
        case errc::precondition_violated: return "PreconditionViolated";
        case errc::wrong_residue_class: return "WrongResidueClass";
        case errc::wrong_characteristic: return "WrongCharacteristic";
        case errc::even_degree_even_char: return "EvenDegreeEvenChar";
        case errc::char_three: return "CharThree";
        case errc::classifier_oracle_mismatch: return "ClassifierOracleMismatch";
        case errc::parse_error: return "ParseError";
        case errc::bad_argument: return "BadArgument";
    }
    return "UnknownError";
}

class error : public std::runtime_error {
  public:
    error(errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
    errc code() const { return code_; }

  private:
    errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw error(code, what); }

inline void require(bool cond, errc code, const std::string& what) {
    if (!cond) fail(code, what);
}

// mt19937_64 raw output is specified by the standard, so seeded runs are
// byte-reproducible across platforms. Distributions are not; use below().
class Rng {
  public:
    static constexpr std::uint64_t default_seed = 0xC0FFEE;

    explicit Rng(std::uint64_t seed = default_seed) : eng_(seed) {}
    std::uint64_t next() { return eng_(); }
    std::uint32_t below(std::uint32_t n) { return n ? static_cast<std::uint32_t>(eng_() % n) : 0; }

  private:
    std::mt19937_64 eng_;
};

// Splits [0, n) into `workers` contiguous ranges; body(begin, end, chunk).
// Chunk boundaries depend only on (n, workers), so per-chunk results merged
// in chunk order are deterministic regardless of scheduling.
template <class Body>
void parallel_chunks(std::uint64_t n, unsigned workers, Body&& body) {
    if (workers <= 1 || n < 2) {
        body(std::uint64_t{0}, n, 0u);
        return;
    }
    if (workers > n) workers = static_cast<unsigned>(n);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        std::uint64_t lo = n * w / workers;
        std::uint64_t hi = n * (w + 1) / workers;
        pool.emplace_back([&body, lo, hi, w] { body(lo, hi, w); });
    }
    for (auto& t : pool) t.join();
}

inline unsigned hardware_workers() {
    unsigned n = std::thread::hardware_concurrency();
    return n ? n : 1;
}

}  // namespace ffperm
