// Two independent decision procedures for "does F permute F_q^n":
// exhaustive evaluation with a seen-rank bitset, and the coefficient test on
// reduced power products (conditions (i) and (ii) of Hermite's criterion,
// multivariate form). They share no code path beyond field arithmetic, so
// each is usable as an oracle for the other.
#pragma once

#include <cstdint>
#include <vector>

#include "mpoly.hpp"

namespace ffperm {

struct PermVerdict {
    enum class Witness { none, collision, hermite_tuple };

    bool is_perm = false;
    Witness kind = Witness::none;
    std::vector<elt> point_a, point_b;   // collision pair, F(a) = F(b), a != b
    std::vector<std::uint32_t> tuple;    // violating exponent tuple

    static PermVerdict perm() { return PermVerdict{true, Witness::none, {}, {}, {}}; }
    static PermVerdict collision(std::vector<elt> a, std::vector<elt> b) {
        return PermVerdict{false, Witness::collision, std::move(a), std::move(b), {}};
    }
    static PermVerdict bad_tuple(std::vector<std::uint32_t> t) {
        return PermVerdict{false, Witness::hermite_tuple, {}, {}, std::move(t)};
    }
};

inline constexpr std::uint64_t default_scan_budget = std::uint64_t{1} << 24;

namespace detail {

inline void decode_point(std::uint64_t idx, std::uint32_t q, std::span<elt> out) {
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = static_cast<elt>(idx % q);
        idx /= q;
    }
}

}  // namespace detail

// Exhaustive scan; early-exits on the first collision and reports it. The
// earlier preimage is recovered by a bounded rescan, so a failing verdict
// always carries a pair that re-verifies by evaluation.
inline PermVerdict brute_force(const PolySystem& F, std::uint64_t budget = default_scan_budget) {
    const Field& f = F.field();
    const std::uint32_t q = f.q();
    const std::uint32_t n = F.nvars();
    std::uint64_t total = 1;
    for (std::uint32_t i = 0; i < n; ++i) {
        total *= q;
        require(total <= budget, errc::budget_exceeded,
                "q^n exceeds the evaluation budget of " + std::to_string(budget));
    }

    std::vector<std::uint64_t> seen((total + 63) / 64, 0);
    std::vector<elt> pt(n), out(n);
    for (std::uint64_t idx = 0; idx < total; ++idx) {
        detail::decode_point(idx, q, pt);
        F.eval(pt, out);
        std::uint64_t rank = 0;
        for (std::uint32_t i = n; i-- > 0;) rank = rank * q + out[i];
        if (seen[rank >> 6] & (std::uint64_t{1} << (rank & 63))) {
            // Rescan for the earlier point with the same image.
            std::vector<elt> pt2(n), out2(n);
            for (std::uint64_t j = 0; j < idx; ++j) {
                detail::decode_point(j, q, pt2);
                F.eval(pt2, out2);
                std::uint64_t r2 = 0;
                for (std::uint32_t i = n; i-- > 0;) r2 = r2 * q + out2[i];
                if (r2 == rank) return PermVerdict::collision(std::move(pt2), std::move(pt));
            }
            fail(errc::bad_argument, "unreachable: collision vanished on rescan");
        }
        seen[rank >> 6] |= std::uint64_t{1} << (rank & 63);
    }
    return PermVerdict::perm();
}

namespace detail {

// Coefficient of x_1^(q-1) ... x_n^(q-1) in the reduced product A * B, both
// operands already reduced. A pair of per-variable exponents (ea, eb) lands
// on q-1 exactly when ea + eb is q-1 or 2(q-1).
inline elt coeff_of_top_monomial_in_product(const MultiPoly& A, const MultiPoly& B) {
    const Field& f = A.field();
    const std::uint32_t q = f.q();
    const std::uint32_t n = A.nvars();
    elt total = 0;
    for (const auto& ta : A.terms()) {
        // Complement exponents per variable: one or two candidates.
        std::uint32_t cand[MultiPoly::max_vars][2];
        std::uint32_t ncand[MultiPoly::max_vars];
        for (std::uint32_t v = 0; v < n; ++v) {
            std::uint32_t ea = MultiPoly::unpack(ta.key, v);
            ncand[v] = 0;
            cand[v][ncand[v]++] = q - 1 - ea;
            if (ea == q - 1) cand[v][ncand[v]++] = q - 1;  // sum 2(q-1) also folds to q-1
        }
        std::uint32_t combos = 1;
        for (std::uint32_t v = 0; v < n; ++v) combos *= ncand[v];
        for (std::uint32_t c = 0; c < combos; ++c) {
            std::uint64_t key = 0;
            std::uint32_t cc = c;
            for (std::uint32_t v = 0; v < n; ++v) {
                key |= static_cast<std::uint64_t>(cand[v][cc % ncand[v]]) << (MultiPoly::exp_bits * v);
                cc /= ncand[v];
            }
            elt cb = B.coefficient_of_key(key);
            if (cb) total = f.add(total, f.mul(ta.coeff, cb));
        }
    }
    return total;
}

}  // namespace detail

// Reduced powers F_i^t for t in [0, q-1], computed incrementally.
inline std::vector<std::vector<MultiPoly>> hermite_power_table(const PolySystem& F) {
    const Field& f = F.field();
    const std::uint32_t q = f.q();
    std::vector<std::vector<MultiPoly>> powers(F.nvars());
    for (std::uint32_t i = 0; i < F.nvars(); ++i) {
        powers[i].reserve(q);
        powers[i].push_back(MultiPoly::constant(f, F.nvars(), 1));
        MultiPoly base = F[i].reduced();
        for (std::uint32_t t = 1; t < q; ++t) powers[i].push_back(powers[i].back().times(base));
    }
    return powers;
}

// Coefficient of the all-(q-1) monomial in reduce(prod F_i^(t_i)).
inline elt hermite_coefficient(const std::vector<std::vector<MultiPoly>>& powers,
                               std::span<const std::uint32_t> t) {
    const MultiPoly& first = powers[0][t[0]];
    const Field& f = first.field();
    const std::uint32_t n = first.nvars();
    if (n == 1) {
        std::uint32_t top = f.q() - 1;
        return first.coefficient_of_key(top);
    }
    MultiPoly acc = first;
    for (std::uint32_t i = 1; i + 1 < n; ++i) acc = acc.times(powers[i][t[i]]);
    return detail::coeff_of_top_monomial_in_product(acc, powers[n - 1][t[n - 1]]);
}

// Hermite's criterion. True iff the all-(q-1) power product has a nonzero
// top-monomial coefficient (condition i) and every other admissible tuple
// has a zero one (condition ii). Tuples are enumerated lexicographically so
// the reported violation is deterministic.
inline PermVerdict hermite_check(const PolySystem& F, std::uint64_t budget = default_scan_budget) {
    const Field& f = F.field();
    const std::uint32_t q = f.q();
    const std::uint32_t p = f.p();
    const std::uint32_t n = F.nvars();
    std::uint64_t tuples = 1;
    for (std::uint32_t i = 0; i < n; ++i) {
        tuples *= q;
        require(tuples <= budget, errc::budget_exceeded,
                "tuple count exceeds the budget of " + std::to_string(budget));
    }

    auto powers = hermite_power_table(F);

    std::vector<std::uint32_t> t(n, 0);
    for (std::uint64_t idx = 0; idx < tuples; ++idx) {
        std::uint64_t v = idx;
        for (std::uint32_t i = n; i-- > 0;) {
            t[i] = static_cast<std::uint32_t>(v % q);
            v /= q;
        }
        bool all_top = true, all_div_p = true;
        for (std::uint32_t i = 0; i < n; ++i) {
            all_top &= (t[i] == q - 1);
            all_div_p &= (t[i] % p == 0);
        }
        if (all_top) {
            if (hermite_coefficient(powers, t) == 0) return PermVerdict::bad_tuple(t);
        } else if (!all_div_p) {
            if (hermite_coefficient(powers, t) != 0) return PermVerdict::bad_tuple(t);
        }
    }
    return PermVerdict::perm();
}

}  // namespace ffperm
