// Linear and coordinate-shift equivalence steps with machine-checkable
// witness chains. A witness is an ordered list of steps; replaying it on F
// and comparing normal forms verifies a claimed equivalence.
//
// Coordinate shifts are accepted when the system is triangular under some
// variable-pinning order: there is a permutation tau and a split k such
// that coordinates below k use only the first k pinned variables, every
// later coordinate j is (univariate in its pinned variable) + (polynomial
// in earlier pinned variables), and each added shift lives in the earlier
// pinned variables of its coordinate. Each coordinate then pins its
// variable independently of the shift, so the permutation verdict is
// unchanged in both directions.
#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <variant>
#include <vector>

#include "mpoly.hpp"

namespace ffperm {

struct LeftLinear {
    Matrix m;  // output side: G = m o F
};
struct RightLinear {
    Matrix m;  // input side: G = F o m
};
struct CsShift {
    std::vector<MultiPoly> shifts;  // one per coordinate, zero polys allowed
};
struct Relabel {
    std::vector<std::uint32_t> perm;  // substitution x_i -> x_perm[i]
};

using EquivStep = std::variant<LeftLinear, RightLinear, CsShift, Relabel>;

struct EquivWitness {
    std::vector<EquivStep> steps;

    EquivWitness& left(Matrix m) {
        steps.push_back(LeftLinear{std::move(m)});
        return *this;
    }
    EquivWitness& right(Matrix m) {
        steps.push_back(RightLinear{std::move(m)});
        return *this;
    }
    EquivWitness& cs(std::vector<MultiPoly> shifts) {
        steps.push_back(CsShift{std::move(shifts)});
        return *this;
    }
    EquivWitness& relabel(std::vector<std::uint32_t> perm) {
        steps.push_back(Relabel{std::move(perm)});
        return *this;
    }
    EquivWitness& append(const EquivWitness& w) {
        steps.insert(steps.end(), w.steps.begin(), w.steps.end());
        return *this;
    }
};

// rho o F o sigma, both matrices invertible. Reduced.
inline PolySystem apply_linear(const PolySystem& F, const Matrix& rho, const Matrix& sigma) {
    require(rho.invertible(), errc::singular_matrix, "left transform is singular");
    require(sigma.invertible(), errc::singular_matrix, "right transform is singular");
    return apply_output_linear(rho, compose_linear(F, sigma));
}

namespace detail {

// Coordinate j decomposes as phi(x_pinned) + psi(allowed earlier vars)?
inline bool triangular_tail(const MultiPoly& p, std::uint32_t pinned, std::uint32_t earlier_mask) {
    for (const auto& t : p.terms()) {
        std::uint32_t used = 0;
        for (std::uint32_t v = 0; v < p.nvars(); ++v)
            if (MultiPoly::unpack(t.key, v)) used |= 1u << v;
        bool pure_pinned = (used & ~(1u << pinned)) == 0;
        bool in_earlier = (used & ~earlier_mask) == 0;
        if (!pure_pinned && !in_earlier) return false;
    }
    return true;
}

inline bool cs_shift_legal(const PolySystem& F, const std::vector<MultiPoly>& shifts) {
    const std::uint32_t n = F.nvars();
    std::vector<std::uint32_t> tau(n);
    std::iota(tau.begin(), tau.end(), 0u);
    do {
        for (std::uint32_t k = 0; k <= n; ++k) {
            std::uint32_t prefix_mask = 0;
            for (std::uint32_t j = 0; j < k; ++j) prefix_mask |= 1u << tau[j];
            bool ok = true;
            for (std::uint32_t j = 0; j < n && ok; ++j) {
                std::uint32_t earlier = 0;
                for (std::uint32_t i = 0; i < j; ++i) earlier |= 1u << tau[i];
                if (j < k) {
                    ok = shifts[j].is_zero() && (F[j].vars_used() & ~prefix_mask) == 0;
                } else {
                    ok = triangular_tail(F[j], tau[j], earlier) &&
                         (shifts[j].vars_used() & ~earlier) == 0;
                }
            }
            if (ok) return true;
        }
    } while (std::next_permutation(tau.begin(), tau.end()));
    return false;
}

}  // namespace detail

// Adds shifts[i] to the i-th coordinate after checking the triangular shape
// described above. Reduced.
inline PolySystem apply_cs_shift(const PolySystem& F, const std::vector<MultiPoly>& shifts) {
    require(shifts.size() == F.nvars(), errc::arity_mismatch,
            "one shift polynomial per coordinate required");
    for (const MultiPoly& h : shifts) {
        require(&h.field() == &F.field(), errc::field_mismatch, "shift over a different field");
        require(h.nvars() == F.nvars(), errc::arity_mismatch, "shift arity mismatch");
    }
    require(detail::cs_shift_legal(F.reduced(), shifts), errc::illegal_shift_dependency,
            "shift violates the coordinate-shift shape");
    std::vector<MultiPoly> out;
    out.reserve(F.nvars());
    for (std::uint32_t i = 0; i < F.nvars(); ++i) out.push_back(F[i].plus(shifts[i]).reduced());
    return PolySystem(std::move(out));
}

// Substitution x_i -> x_perm[i].
inline PolySystem apply_relabel(const PolySystem& F, const std::vector<std::uint32_t>& perm) {
    const std::uint32_t n = F.nvars();
    require(perm.size() == n, errc::arity_mismatch, "relabel arity mismatch");
    std::uint32_t seen = 0;
    for (std::uint32_t v : perm) {
        require(v < n, errc::bad_argument, "relabel index out of range");
        seen |= 1u << v;
    }
    require(seen == (1u << n) - 1, errc::bad_argument, "relabels must be permutations");

    std::vector<MultiPoly> out;
    out.reserve(n);
    for (const MultiPoly& p : F.polys()) {
        MultiPoly r(F.field(), n);
        for (const auto& t : p.terms()) {
            std::uint64_t key = 0;
            for (std::uint32_t v = 0; v < n; ++v)
                key |= static_cast<std::uint64_t>(MultiPoly::unpack(t.key, v))
                       << (MultiPoly::exp_bits * perm[v]);
            r.add_term_key(key, t.coeff);
        }
        out.push_back(r.reduced());
    }
    return PolySystem(std::move(out));
}

inline PolySystem apply_step(const PolySystem& F, const EquivStep& step) {
    if (const auto* l = std::get_if<LeftLinear>(&step)) {
        require(l->m.invertible(), errc::singular_matrix, "left transform is singular");
        return apply_output_linear(l->m, F);
    }
    if (const auto* r = std::get_if<RightLinear>(&step)) {
        require(r->m.invertible(), errc::singular_matrix, "right transform is singular");
        return compose_linear(F, r->m);
    }
    if (const auto* c = std::get_if<CsShift>(&step)) return apply_cs_shift(F, c->shifts);
    return apply_relabel(F, std::get<Relabel>(step).perm);
}

inline PolySystem apply_witness(const PolySystem& F, const EquivWitness& w) {
    PolySystem g = F.reduced();
    for (const EquivStep& s : w.steps) g = apply_step(g, s);
    return g;
}

// Replays w on F and compares with reduce(G) term by term. Malformed steps
// make the witness invalid rather than raising.
inline bool verify_witness(const PolySystem& F, const PolySystem& G, const EquivWitness& w) {
    try {
        return apply_witness(F, w) == G.reduced();
    } catch (const error&) {
        return false;
    }
}

}  // namespace ffperm
