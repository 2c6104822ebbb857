#include "modtower/fieldlin.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace modtower {

namespace {

Rational pow2_neg(long bits)
{
    Integer d = 1;
    mpz_mul_2exp(d.get_mpz_t(), d.get_mpz_t(), static_cast<mp_bitcnt_t>(bits));
    return Rational(Integer(1), d);
}

/// Columns: K-coordinates of f_j * v_i, column index i * |basis| + j.
Mat<Rational> q_columns(const std::vector<NFElem>& basis, const std::vector<std::vector<NFElem>>& vecs,
                        int field_degree)
{
    const std::size_t len = vecs.empty() ? 0 : vecs.front().size();
    const auto rows = static_cast<Eigen::Index>(len * static_cast<std::size_t>(field_degree));
    const auto cols = static_cast<Eigen::Index>(vecs.size() * basis.size());
    Mat<Rational> m(rows, cols);
    for (std::size_t i = 0; i < vecs.size(); ++i)
        for (std::size_t j = 0; j < basis.size(); ++j) {
            const auto col = static_cast<Eigen::Index>(i * basis.size() + j);
            for (std::size_t s = 0; s < len; ++s) {
                auto c = (basis[j] * vecs[i][s]).coords();
                for (int r = 0; r < field_degree; ++r)
                    m(static_cast<Eigen::Index>(s * static_cast<std::size_t>(field_degree)) + r, col) =
                        c[static_cast<std::size_t>(r)];
            }
        }
    return m;
}

int span_rank(const std::vector<NFElem>& basis, const std::vector<std::vector<NFElem>>& vecs, int field_degree)
{
    if (vecs.empty())
        return 0;
    return rank(q_columns(basis, vecs, field_degree)) / static_cast<int>(basis.size());
}

std::optional<std::vector<NFElem>> span_dependence(const std::vector<NFElem>& basis,
                                                   const std::vector<std::vector<NFElem>>& vecs, int field_degree)
{
    auto ns = nullspace(q_columns(basis, vecs, field_degree));
    if (ns.empty())
        return std::nullopt;
    const auto& v = ns.front();
    std::vector<NFElem> coeffs;
    for (std::size_t i = 0; i < vecs.size(); ++i) {
        NFElem c = basis.front() - basis.front();
        for (std::size_t j = 0; j < basis.size(); ++j)
            c = c + NFElem(v(static_cast<Eigen::Index>(i * basis.size() + j))) * basis[j];
        coeffs.push_back(c);
    }
    return coeffs;
}

std::vector<NFElem> power_basis(const NFElem& theta, int degree, const NumberField& k)
{
    std::vector<NFElem> b;
    NFElem p = k.one();
    for (int j = 0; j < degree; ++j) {
        b.push_back(p);
        p = p * theta;
    }
    return b;
}

/// The primitive element of `sub`, whose generators sit at positions
/// first..first+|gens| of the workspace field's generator list.
NFElem embed_primitive(const PresentedField& sub, const PresentedField& k, std::size_t first)
{
    NFElem t = k.field.zero();
    for (std::size_t i = 0; i < sub.generators.size(); ++i)
        t = t + NFElem(Rational(sub.combination[i])) * k.generator_coords[first + i];
    return t;
}

} // namespace

PresentedField rationals() { return primitive_element({AlgebraicNumber(0)}); }

PresentedField field_of(const std::vector<AlgebraicNumber>& gens)
{
    return gens.empty() ? rationals() : primitive_element(gens);
}

// ---- Workspace ------------------------------------------------------------------

Workspace::Workspace(const PresentedField& base, const std::vector<AlgebraicNumber>& elements)
{
    std::vector<std::vector<AlgebraicNumber>> v;
    for (const auto& e : elements)
        v.push_back({e});
    init(base, v);
}

Workspace::Workspace(const PresentedField& base, const std::vector<std::vector<AlgebraicNumber>>& vectors)
{
    init(base, vectors);
}

void Workspace::init(const PresentedField& base, const std::vector<std::vector<AlgebraicNumber>>& vectors)
{
    len_ = vectors.empty() ? 1 : vectors.front().size();
    std::vector<AlgebraicNumber> gens = base.generators;
    for (const auto& v : vectors) {
        if (v.size() != len_)
            throw std::invalid_argument("vectors of different lengths");
        gens.insert(gens.end(), v.begin(), v.end());
    }
    k_ = primitive_element(gens);
    base_basis_ = power_basis(embed_primitive(base, k_, 0), base.degree(), k_.field);
    std::size_t pos = base.generators.size();
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        std::vector<NFElem> row;
        for (std::size_t s = 0; s < len_; ++s)
            row.push_back(k_.generator_coords[pos++]);
        vecs_.push_back(std::move(row));
    }
}

int Workspace::rank(const std::vector<std::size_t>& which) const
{
    std::vector<std::vector<NFElem>> v;
    for (auto i : which)
        v.push_back(vecs_[i]);
    return span_rank(base_basis_, v, k_.field.degree());
}

int Workspace::rank() const
{
    return span_rank(base_basis_, vecs_, k_.field.degree());
}

std::optional<std::vector<NFElem>> Workspace::dependence(const std::vector<std::size_t>& which) const
{
    std::vector<std::vector<NFElem>> v;
    for (auto i : which)
        v.push_back(vecs_[i]);
    return span_dependence(base_basis_, v, k_.field.degree());
}

// ---- operations -------------------------------------------------------------------

int rank_over(const PresentedField& field, const std::vector<std::vector<AlgebraicNumber>>& vectors)
{
    if (vectors.empty())
        return 0;
    return Workspace(field, vectors).rank();
}

int ldim(const PresentedField& field, const std::vector<AlgebraicNumber>& a, const std::vector<AlgebraicNumber>& b)
{
    std::vector<AlgebraicNumber> all = b;
    all.insert(all.end(), a.begin(), a.end());
    if (all.empty())
        return 0;
    Workspace w(field, all);
    std::vector<std::size_t> ib, iall;
    for (std::size_t i = 0; i < all.size(); ++i) {
        iall.push_back(i);
        if (i < b.size())
            ib.push_back(i);
    }
    return w.rank(iall) - w.rank(ib);
}

DisjointnessResult linearly_disjoint(const PresentedField& e, const std::vector<AlgebraicNumber>& f_gens,
                                     const std::vector<AlgebraicNumber>& l_gens)
{
    // K contains E, F = E(f_gens) and L = E(l_gens)
    std::vector<AlgebraicNumber> fg = e.generators, lg = e.generators;
    fg.insert(fg.end(), f_gens.begin(), f_gens.end());
    lg.insert(lg.end(), l_gens.begin(), l_gens.end());
    PresentedField ef = field_of(fg), lf = field_of(lg);
    Workspace w(lf, fg);
    const NumberField& k = w.field();
    const int n = k.degree();

    auto gens_in_k = [&](std::size_t count) {
        std::vector<NFElem> v;
        for (std::size_t i = 0; i < count; ++i)
            v.push_back(w.element(i));
        return v;
    };
    auto prim = [&](const PresentedField& sub) {
        auto g = gens_in_k(sub.generators.size());
        NFElem t = k.zero();
        for (std::size_t i = 0; i < g.size(); ++i)
            t = t + NFElem(Rational(sub.combination[i])) * g[i];
        return t;
    };
    // E's generators are the first entries of fg
    std::vector<NFElem> e_basis = power_basis(prim(e), e.degree(), k);
    std::vector<NFElem> f_qbasis = power_basis(prim(ef), ef.degree(), k);

    // greedy E-basis of F
    std::vector<std::vector<NFElem>> chosen;
    int r = 0;
    for (const auto& b : f_qbasis) {
        chosen.push_back({b});
        int nr = span_rank(e_basis, chosen, n);
        if (nr == r)
            chosen.pop_back();
        else
            r = nr;
    }
    const int f_over_e = static_cast<int>(chosen.size());
    const int over_l = span_rank(w.base_basis(), chosen, n);
    if (over_l == f_over_e)
        return Disjoint{};
    auto dep = span_dependence(w.base_basis(), chosen, n);
    if (!dep)
        throw std::logic_error("linearly_disjoint: rank deficit without dependence");
    Witness wit;
    for (std::size_t i = 0; i < chosen.size(); ++i) {
        wit.elements.push_back(w.value(chosen[i][0]));
        wit.coefficients.push_back(w.value((*dep)[i]));
    }
    return wit;
}

std::optional<Dependence> find_E_dependence(const PresentedField& e, const std::vector<AlgebraicNumber>& elements)
{
    if (elements.empty())
        return std::nullopt;
    Workspace w(e, elements);
    std::vector<std::size_t> all;
    for (std::size_t i = 0; i < elements.size(); ++i)
        all.push_back(i);
    std::vector<std::vector<NFElem>> v;
    for (auto i : all)
        v.push_back({w.element(i)});
    auto ns = nullspace(q_columns(w.base_basis(), v, w.field().degree()));
    if (ns.empty())
        return std::nullopt;
    const auto& vec = ns.front();
    const std::size_t m = w.base_basis().size();
    Dependence dep;
    for (std::size_t i = 0; i < elements.size(); ++i) {
        std::vector<Rational> coords;
        NFElem c = w.field().zero();
        for (std::size_t j = 0; j < m; ++j) {
            Rational q = vec(static_cast<Eigen::Index>(i * m + j));
            coords.push_back(q);
            c = c + NFElem(q) * w.base_basis()[j];
        }
        dep.coordinates.push_back(std::move(coords));
        dep.coefficients.push_back(w.value(c));
    }
    return dep;
}

// ---- small relations ---------------------------------------------------------------

LinValue LinValue::of(const AlgebraicNumber& a)
{
    return {[a](long bits) { return a.refine(pow2_neg(bits)); }, a};
}

RelationResult no_small_linear_relation(const std::vector<LinValue>& values, long height,
                                        const PresentedField& field, long max_bits)
{
    if (height < 1)
        throw std::invalid_argument("height must be positive");
    const std::size_t n = values.size();
    const auto m = static_cast<std::size_t>(field.degree());
    const std::size_t len = n * m;
    if (len == 0)
        return {RelationStatus::verified, {}};
    double total = std::pow(2.0 * static_cast<double>(height) + 1.0, static_cast<double>(len));
    if (total > 2e6)
        throw std::invalid_argument("search space too large for exhaustive enumeration");

    // all integer vectors in [-H, H]^len whose first nonzero entry is positive
    std::vector<std::vector<long>> cands;
    std::vector<long> v(len, -height);
    for (;;) {
        auto nz = std::find_if(v.begin(), v.end(), [](long x) { return x != 0; });
        if (nz != v.end() && *nz > 0)
            cands.push_back(v);
        std::size_t i = len;
        while (i > 0 && v[i - 1] == height)
            v[--i] = -height;
        if (i == 0)
            break;
        ++v[i - 1];
    }

    bool all_exact = true;
    for (const auto& val : values)
        all_exact = all_exact && val.exact.has_value();
    std::optional<Workspace> ws;
    std::vector<bool> checked(cands.size(), false);
    auto reshape = [&](const std::vector<long>& c) {
        std::vector<std::vector<long>> out(n, std::vector<long>(m));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < m; ++j)
                out[i][j] = c[i * m + j];
        return out;
    };

    for (long bits = 64; bits <= max_bits; bits *= 2) {
        PrecisionScope scope(bits + 32);
        std::vector<Box> vb;
        for (const auto& val : values)
            vb.push_back(val.enclose(bits));
        Box theta = field.primitive_element().refine(pow2_neg(bits));
        std::vector<Box> fb{Box(1)};
        for (std::size_t j = 1; j < m; ++j)
            fb.push_back(fb.back() * theta);

        std::vector<std::vector<long>> keep;
        std::vector<bool> keep_checked;
        for (std::size_t c = 0; c < cands.size(); ++c) {
            Box s(0);
            for (std::size_t i = 0; i < n; ++i) {
                Box coef(0);
                for (std::size_t j = 0; j < m; ++j)
                    if (cands[c][i * m + j] != 0)
                        coef = coef + Box(Rational(cands[c][i * m + j])) * fb[j];
                s = s + coef * vb[i];
            }
            if (s.contains_zero()) {
                keep.push_back(cands[c]);
                keep_checked.push_back(checked[c]);
            }
        }
        cands = std::move(keep);
        checked = std::move(keep_checked);
        if (cands.empty())
            return {RelationStatus::verified, {}};
        if (all_exact) {
            if (!ws) {
                std::vector<AlgebraicNumber> ex;
                for (const auto& val : values)
                    ex.push_back(*val.exact);
                ws.emplace(field, ex);
            }
            for (std::size_t c = 0; c < cands.size(); ++c) {
                if (checked[c])
                    continue;
                checked[c] = true;
                NFElem s = ws->field().zero();
                for (std::size_t i = 0; i < n; ++i)
                    for (std::size_t j = 0; j < m; ++j)
                        s = s + NFElem(Rational(cands[c][i * m + j])) * ws->base_basis()[j] * ws->element(i);
                if (s.is_zero())
                    return {RelationStatus::relation_found, reshape(cands[c])};
            }
        }
    }
    return {RelationStatus::undecided, {}};
}

} // namespace modtower
