// Sparse multivariate polynomials over F_q in up to three variables, with
// reduction modulo (x_i^q - x_i), evaluation, arithmetic, and composition
// with linear maps. Exponent reduction keeps 0 at 0 and folds e > 0 into
// [1, q-1]; this is the unique evaluation-preserving normal form.
#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <vector>

#include "gf.hpp"

namespace ffperm {

class MultiPoly {
  public:
    static constexpr std::uint32_t max_vars = 3;
    static constexpr std::uint32_t exp_bits = 21;
    static constexpr std::uint64_t exp_mask = (std::uint64_t{1} << exp_bits) - 1;

    struct Term {
        std::uint64_t key;  // exponents packed exp_bits per variable
        elt coeff;
        friend bool operator==(const Term&, const Term&) = default;
    };

    MultiPoly(const Field& f, std::uint32_t nvars) : f_(&f), nvars_(nvars) {
        require(nvars >= 1 && nvars <= max_vars, errc::bad_argument,
                "variable count must be between 1 and 3");
    }

    static std::uint64_t pack(std::span<const std::uint32_t> exps) {
        std::uint64_t key = 0;
        for (std::size_t i = exps.size(); i-- > 0;) {
            require(exps[i] <= exp_mask, errc::bad_argument, "exponent too large");
            key = (key << exp_bits) | exps[i];
        }
        return key;
    }

    static std::uint32_t unpack(std::uint64_t key, std::uint32_t var) {
        return static_cast<std::uint32_t>((key >> (exp_bits * var)) & exp_mask);
    }

    const Field& field() const { return *f_; }
    std::uint32_t nvars() const { return nvars_; }
    const std::vector<Term>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    // Accumulate c * prod(x_i^exps[i]); exponents are kept as given.
    void add_term(std::span<const std::uint32_t> exps, elt c) {
        require(exps.size() == nvars_, errc::arity_mismatch, "exponent vector arity mismatch");
        if (!c) return;
        add_term_key(pack(exps), c);
    }

    void add_term_key(std::uint64_t key, elt c) {
        if (!c) return;
        auto it = std::lower_bound(terms_.begin(), terms_.end(), key,
                                   [](const Term& t, std::uint64_t k) { return t.key < k; });
        if (it != terms_.end() && it->key == key) {
            elt s = f_->add(it->coeff, c);
            if (s)
                it->coeff = s;
            else
                terms_.erase(it);
        } else {
            terms_.insert(it, Term{key, c});
        }
    }

    static MultiPoly zero(const Field& f, std::uint32_t nvars) { return MultiPoly(f, nvars); }

    static MultiPoly constant(const Field& f, std::uint32_t nvars, elt c) {
        MultiPoly r(f, nvars);
        if (c) r.terms_.push_back(Term{0, c});
        return r;
    }

    static MultiPoly variable(const Field& f, std::uint32_t nvars, std::uint32_t var, elt c = 1) {
        require(var < nvars, errc::bad_argument, "variable index out of range");
        MultiPoly r(f, nvars);
        if (c) r.terms_.push_back(Term{std::uint64_t{1} << (exp_bits * var), c});
        return r;
    }

    // Monomial c * prod x_i^exps[i].
    static MultiPoly monomial(const Field& f, std::span<const std::uint32_t> exps, elt c) {
        MultiPoly r(f, static_cast<std::uint32_t>(exps.size()));
        r.add_term(exps, c);
        return r;
    }

    std::uint32_t reduce_exp(std::uint32_t e) const {
        if (e == 0) return 0;
        return (e - 1) % (f_->q() - 1) + 1;
    }

    std::uint64_t reduce_key(std::uint64_t key) const {
        std::uint64_t out = 0;
        for (std::uint32_t v = 0; v < nvars_; ++v)
            out |= static_cast<std::uint64_t>(reduce_exp(unpack(key, v))) << (exp_bits * v);
        return out;
    }

    // Normal form modulo (x_i^q - x_i); evaluates identically at every point.
    MultiPoly reduced() const {
        MultiPoly r(*f_, nvars_);
        for (const Term& t : terms_) r.add_term_key(reduce_key(t.key), t.coeff);
        return r;
    }

    bool is_reduced() const {
        for (const Term& t : terms_)
            if (t.key != reduce_key(t.key)) return false;
        return true;
    }

    elt eval(std::span<const elt> point) const {
        require(point.size() == nvars_, errc::arity_mismatch, "evaluation point arity mismatch");
        elt acc = 0;
        for (const Term& t : terms_) {
            elt v = t.coeff;
            for (std::uint32_t i = 0; i < nvars_ && v; ++i) {
                std::uint32_t e = unpack(t.key, i);
                if (e) v = f_->mul(v, f_->pow(point[i], e));
            }
            acc = f_->add(acc, v);
        }
        return acc;
    }

    elt coefficient_of(std::span<const std::uint32_t> exps) const {
        require(exps.size() == nvars_, errc::arity_mismatch, "exponent vector arity mismatch");
        std::uint64_t key = pack(exps);
        auto it = std::lower_bound(terms_.begin(), terms_.end(), key,
                                   [](const Term& t, std::uint64_t k) { return t.key < k; });
        return (it != terms_.end() && it->key == key) ? it->coeff : 0;
    }

    elt coefficient_of_key(std::uint64_t key) const {
        auto it = std::lower_bound(terms_.begin(), terms_.end(), key,
                                   [](const Term& t, std::uint64_t k) { return t.key < k; });
        return (it != terms_.end() && it->key == key) ? it->coeff : 0;
    }

    MultiPoly plus(const MultiPoly& o) const {
        same(o);
        MultiPoly r = *this;
        for (const Term& t : o.terms_) r.add_term_key(t.key, t.coeff);
        return r;
    }

    MultiPoly minus(const MultiPoly& o) const {
        same(o);
        MultiPoly r = *this;
        for (const Term& t : o.terms_) r.add_term_key(t.key, f_->neg(t.coeff));
        return r;
    }

    MultiPoly scaled(elt c) const {
        MultiPoly r(*f_, nvars_);
        if (!c) return r;
        r.terms_.reserve(terms_.size());
        for (const Term& t : terms_) r.terms_.push_back(Term{t.key, f_->mul(t.coeff, c)});
        return r;
    }

    // Reduced product. Operands are brought to normal form first so packed
    // per-variable exponent sums cannot carry across key lanes.
    MultiPoly times(const MultiPoly& o) const {
        same(o);
        if (!is_reduced()) return reduced().times(o);
        if (!o.is_reduced()) return times(o.reduced());
        MultiPoly r(*f_, nvars_);
        for (const Term& a : terms_)
            for (const Term& b : o.terms_) {
                std::uint64_t key = r.reduce_key(a.key + b.key);
                r.add_term_key(key, f_->mul(a.coeff, b.coeff));
            }
        return r;
    }

    MultiPoly pow(std::uint32_t e) const {
        MultiPoly r = constant(*f_, nvars_, 1);
        MultiPoly base = reduced();
        while (e) {
            if (e & 1) r = r.times(base);
            base = base.times(base);
            e >>= 1;
        }
        return r;
    }

    // Bitmask of variables appearing with a positive exponent.
    std::uint32_t vars_used() const {
        std::uint32_t mask = 0;
        for (const Term& t : terms_)
            for (std::uint32_t v = 0; v < nvars_; ++v)
                if (unpack(t.key, v)) mask |= 1u << v;
        return mask;
    }

    friend bool operator==(const MultiPoly& a, const MultiPoly& b) {
        a.same(b);
        return a.terms_ == b.terms_;
    }

  private:
    void same(const MultiPoly& o) const {
        require(f_ == o.f_, errc::field_mismatch, "polynomials over different field specs");
        require(nvars_ == o.nvars_, errc::arity_mismatch, "polynomials with different arities");
    }

    const Field* f_;
    std::uint32_t nvars_;
    std::vector<Term> terms_;  // sorted by key, no zero coefficients
};

// Square matrix over a field, for the linear sides of equivalence transforms.
class Matrix {
  public:
    Matrix(const Field& f, std::uint32_t n) : f_(&f), n_(n), a_(static_cast<std::size_t>(n) * n, 0) {}

    static Matrix identity(const Field& f, std::uint32_t n) {
        Matrix m(f, n);
        for (std::uint32_t i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }

    static Matrix from_rows(const Field& f, std::initializer_list<std::initializer_list<elt>> rows) {
        Matrix m(f, static_cast<std::uint32_t>(rows.size()));
        std::uint32_t i = 0;
        for (auto& row : rows) {
            require(row.size() == rows.size(), errc::bad_argument, "matrix must be square");
            std::uint32_t j = 0;
            for (elt v : row) m.at(i, j++) = v;
            ++i;
        }
        return m;
    }

    const Field& field() const { return *f_; }
    std::uint32_t n() const { return n_; }
    elt& at(std::uint32_t i, std::uint32_t j) { return a_[static_cast<std::size_t>(i) * n_ + j]; }
    elt at(std::uint32_t i, std::uint32_t j) const { return a_[static_cast<std::size_t>(i) * n_ + j]; }

    Matrix times(const Matrix& o) const {
        require(f_ == o.f_ && n_ == o.n_, errc::field_mismatch, "matrix shape/field mismatch");
        Matrix r(*f_, n_);
        for (std::uint32_t i = 0; i < n_; ++i)
            for (std::uint32_t k = 0; k < n_; ++k) {
                elt v = at(i, k);
                if (!v) continue;
                for (std::uint32_t j = 0; j < n_; ++j)
                    r.at(i, j) = f_->add(r.at(i, j), f_->mul(v, o.at(k, j)));
            }
        return r;
    }

    elt det() const {
        Matrix t = *this;
        elt d = 1;
        for (std::uint32_t c = 0; c < n_; ++c) {
            std::uint32_t pivot = c;
            while (pivot < n_ && !t.at(pivot, c)) ++pivot;
            if (pivot == n_) return 0;
            if (pivot != c) {
                for (std::uint32_t j = 0; j < n_; ++j) std::swap(t.at(pivot, j), t.at(c, j));
                d = f_->neg(d);
            }
            d = f_->mul(d, t.at(c, c));
            elt inv = f_->inv(t.at(c, c));
            for (std::uint32_t r = c + 1; r < n_; ++r) {
                elt factor = f_->mul(t.at(r, c), inv);
                if (!factor) continue;
                for (std::uint32_t j = c; j < n_; ++j)
                    t.at(r, j) = f_->sub(t.at(r, j), f_->mul(factor, t.at(c, j)));
            }
        }
        return d;
    }

    bool invertible() const { return det() != 0; }

    Matrix inverse() const {
        require(invertible(), errc::singular_matrix, "matrix is singular");
        Matrix t = *this;
        Matrix r = identity(*f_, n_);
        for (std::uint32_t c = 0; c < n_; ++c) {
            std::uint32_t pivot = c;
            while (!t.at(pivot, c)) ++pivot;
            if (pivot != c)
                for (std::uint32_t j = 0; j < n_; ++j) {
                    std::swap(t.at(pivot, j), t.at(c, j));
                    std::swap(r.at(pivot, j), r.at(c, j));
                }
            elt inv = f_->inv(t.at(c, c));
            for (std::uint32_t j = 0; j < n_; ++j) {
                t.at(c, j) = f_->mul(t.at(c, j), inv);
                r.at(c, j) = f_->mul(r.at(c, j), inv);
            }
            for (std::uint32_t row = 0; row < n_; ++row) {
                if (row == c || !t.at(row, c)) continue;
                elt factor = t.at(row, c);
                for (std::uint32_t j = 0; j < n_; ++j) {
                    t.at(row, j) = f_->sub(t.at(row, j), f_->mul(factor, t.at(c, j)));
                    r.at(row, j) = f_->sub(r.at(row, j), f_->mul(factor, r.at(c, j)));
                }
            }
        }
        return r;
    }

    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.f_ == b.f_ && a.n_ == b.n_ && a.a_ == b.a_;
    }

  private:
    const Field* f_;
    std::uint32_t n_;
    std::vector<elt> a_;  // row-major
};

// Ordered n-tuple of polynomials in n variables over one field.
class PolySystem {
  public:
    explicit PolySystem(std::vector<MultiPoly> polys) : polys_(std::move(polys)) {
        require(!polys_.empty(), errc::bad_argument, "a system needs at least one polynomial");
        const Field* f = &polys_.front().field();
        for (const MultiPoly& p : polys_) {
            require(&p.field() == f, errc::field_mismatch, "system members over different fields");
            require(p.nvars() == polys_.size(), errc::arity_mismatch,
                    "system length must equal the variable count of every member");
        }
    }

    const Field& field() const { return polys_.front().field(); }
    std::uint32_t nvars() const { return static_cast<std::uint32_t>(polys_.size()); }
    const MultiPoly& operator[](std::size_t i) const { return polys_[i]; }
    const std::vector<MultiPoly>& polys() const { return polys_; }

    PolySystem reduced() const {
        std::vector<MultiPoly> out;
        out.reserve(polys_.size());
        for (const MultiPoly& p : polys_) out.push_back(p.reduced());
        return PolySystem(std::move(out));
    }

    void eval(std::span<const elt> point, std::span<elt> out) const {
        for (std::size_t i = 0; i < polys_.size(); ++i) out[i] = polys_[i].eval(point);
    }

    friend bool operator==(const PolySystem& a, const PolySystem& b) {
        return a.polys_ == b.polys_;
    }

  private:
    std::vector<MultiPoly> polys_;
};

// f(Mx): substitute x_i by the i-th row form sum_j M[i][j] x_j. Reduced.
inline MultiPoly substitute_linear(const MultiPoly& f, const Matrix& M) {
    const Field& F = f.field();
    require(&M.field() == &F, errc::field_mismatch, "matrix over a different field");
    require(M.n() == f.nvars(), errc::arity_mismatch, "matrix size must match arity");
    const std::uint32_t n = f.nvars();

    std::vector<MultiPoly> forms;
    forms.reserve(n);
    for (std::uint32_t i = 0; i < n; ++i) {
        MultiPoly l(F, n);
        for (std::uint32_t j = 0; j < n; ++j)
            if (M.at(i, j)) l = l.plus(MultiPoly::variable(F, n, j, M.at(i, j)));
        forms.push_back(std::move(l));
    }

    MultiPoly out(F, n);
    for (const auto& t : f.terms()) {
        MultiPoly term = MultiPoly::constant(F, n, t.coeff);
        for (std::uint32_t v = 0; v < n; ++v) {
            std::uint32_t e = MultiPoly::unpack(t.key, v);
            if (e) term = term.times(forms[v].pow(e));
        }
        out = out.plus(term);
    }
    return out.reduced();
}

// F composed with the nonsingular substitution x -> Mx (singularity is the
// caller's concern; composition itself accepts any M). Reduced output.
inline PolySystem compose_linear(const PolySystem& F, const Matrix& M) {
    std::vector<MultiPoly> out;
    out.reserve(F.nvars());
    for (const MultiPoly& p : F.polys()) out.push_back(substitute_linear(p, M));
    return PolySystem(std::move(out));
}

// Output-side linear map: G_i = sum_j M[i][j] F_j. Reduced.
inline PolySystem apply_output_linear(const Matrix& M, const PolySystem& F) {
    const Field& f = F.field();
    require(&M.field() == &f, errc::field_mismatch, "matrix over a different field");
    require(M.n() == F.nvars(), errc::arity_mismatch, "matrix size must match system length");
    std::vector<MultiPoly> out;
    for (std::uint32_t i = 0; i < M.n(); ++i) {
        MultiPoly g(f, F.nvars());
        for (std::uint32_t j = 0; j < M.n(); ++j)
            if (M.at(i, j)) g = g.plus(F[j].scaled(M.at(i, j)));
        out.push_back(g.reduced());
    }
    return PolySystem(std::move(out));
}

// F + c, one constant per coordinate.
inline PolySystem add_constants(const PolySystem& F, std::span<const elt> c) {
    require(c.size() == F.nvars(), errc::arity_mismatch, "constant vector arity mismatch");
    std::vector<MultiPoly> out;
    for (std::size_t i = 0; i < c.size(); ++i)
        out.push_back(F[i].plus(MultiPoly::constant(F.field(), F.nvars(), c[i])));
    return PolySystem(std::move(out));
}

}  // namespace ffperm
