#include "selcomp/descent.hpp"

#include "selcomp/error.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <set>

namespace selcomp {

namespace {

std::mutex algebra_mutex;
std::map<std::string, std::shared_ptr<const EtaleAlgebra>> algebra_cache;

PolyQ twisted_cubic(const PolyQ& g, const Int& d)
{
    Rat D(d);
    return PolyQ({g.coeff(0) * D * D * D, g.coeff(1) * D * D, g.coeff(2) * D, Rat(1)});
}

int two_torsion_dim_from_roots(int roots) { return roots == 3 ? 2 : roots; }

bool is_zero_elt(const FieldElt& a)
{
    return std::all_of(a.begin(), a.end(), [](const Rat& x) { return x == 0; });
}

// Coordinates of one component of A in the square classes of its completions at v.
ModRow component_coords(const NumberField& F, const FieldElt& a, const Place& v)
{
    ModRow out;
    if (v.is_infinite()) {
        for (auto b : F.real_signs(a)) out.push_back(b);
        return out;
    }
    for (const auto& P : F.primes_above(v.prime()))
        for (auto b : F.local_class(a, P)) out.push_back(b);
    return out;
}

std::vector<std::string> ambient_labels(const EtaleAlgebra& alg, const Place& v)
{
    std::vector<std::string> out;
    for (std::size_t i = 0; i < alg.component_count(); ++i) {
        const NumberField& F = alg.field(i);
        std::string tag = "K" + std::to_string(i + 1) + ":";
        if (v.is_infinite()) {
            for (int j = 0; j < F.real_places(); ++j) out.push_back(tag + "real" + std::to_string(j + 1));
            continue;
        }
        for (const auto& P : F.primes_above(v.prime())) {
            out.push_back(tag + P.to_string() + ":val");
            for (int b = 1; b < F.local_class_dim(P); ++b) out.push_back(tag + P.to_string() + ":u" + std::to_string(b));
        }
    }
    return out;
}

// Class of the point with abscissa X on Y^2 = g_d(X); the component where X - dT
// vanishes (a rational 2-torsion point) takes g_d'(X) instead.
std::vector<FieldElt> point_class(const EtaleAlgebra& alg, const PolyQ& gd, const Int& d, const Rat& X)
{
    auto comps = alg.components(PolyQ({X, Rat(-d)}));
    for (auto& c : comps)
        if (is_zero_elt(c)) c = FieldElt{gd.derivative().eval(X)};
    return comps;
}

struct Setup {
    WeierstrassCurve minimal;
    PolyQ g;
    Int d;
    PolyQ gd;
    std::shared_ptr<const EtaleAlgebra> alg;
};

Setup make_setup(const WeierstrassCurve& c, const Int& d, const Int& cap)
{
    if (d == 0) throw precondition_error("twist parameter must be nonzero");
    Setup s;
    s.minimal = minimal_model(c);
    s.g = two_division_poly_integral(s.minimal);
    s.d = squarefree_part(d).core.value();
    s.gd = twisted_cubic(s.g, s.d);
    s.alg = descent_algebra(s.g, cap);
    return s;
}

int target_for(const PolyQ& gd, const Place& v)
{
    int roots = count_roots_local(gd, v);
    if (v.is_infinite()) return roots == 3 ? 1 : 0;
    int t = two_torsion_dim_from_roots(roots);
    return v.prime() == 2 ? t + 1 : t;
}

LocalImage compute_local_image(const Setup& s, const Place& v, long budget)
{
    const EtaleAlgebra& alg = *s.alg;
    LocalImage out;
    out.place = v;
    out.ambient_basis = ambient_labels(alg, v);
    const int target = target_for(s.gd, v);
    if (target == 0) return out;

    std::vector<ModRow> span;
    long spent = 0;
    auto try_x = [&](const Rat& X) {
        if (++spent > budget)
            throw budget_error("local image at " + v.to_string() + " stopped at dimension " +
                               std::to_string(out.dim) + " of " + std::to_string(target));
        Rat y2 = s.gd.eval(X);
        if (y2 != 0 && !is_square_local(y2, v)) return false;
        ModRow coords = local_coordinates(alg, point_class(alg, s.gd, s.d, X), v);
        span.push_back(coords);
        auto r = static_cast<int>(rank_mod(span, 2));
        if (r > out.dim) {
            out.dim = r;
            out.sample_x.push_back(X);
        } else {
            span.pop_back();
        }
        if (out.dim > target) throw precondition_error("local image exceeds its a priori dimension at " + v.to_string());
        return out.dim == target;
    };
    auto finish = [&]() {
        out.subspace = row_echelon_mod(span, 2);
        return out;
    };

    for (const Rat& r : rational_roots(s.gd))
        if (try_x(r)) return finish();

    if (v.is_infinite()) {
        auto roots = isolate_real_roots(s.gd);
        if (roots.size() == 3) {
            Rat width = (roots[1].lo - roots[0].hi) > 0 ? Rat(1) : Rat(1, 1000);
            while (roots[0].hi >= roots[1].lo) {
                refine_root(s.gd, roots[0], width);
                refine_root(s.gd, roots[1], width);
                width /= 2;
            }
            if (try_x((roots[0].hi + roots[1].lo) / 2)) return finish();
        }
        throw precondition_error("no real point found between the first two real roots");
    }

    const Int& p = v.prime();
    std::vector<Rat> proots;
    for (const Int& r : padic_integral_roots(s.gd, p, 40)) proots.emplace_back(r);
    PolyQ dg = s.gd.derivative();
    for (long R = 0;; ++R) {
        for (int j = -6; j <= 6; ++j) {
            Rat pj = pow_rat(Rat(p), j);
            for (long a : {R, -R}) {
                if (try_x(Rat(a) * pj)) return finish();
                if (R == 0) break;
            }
        }
        for (const Rat& r : proots) {
            for (int j = 0; j <= 24; ++j) {
                Rat pj = pow_rat(Rat(p), j);
                for (long a : {R, -R}) {
                    if (try_x(r + Rat(a) * pj)) return finish();
                    if (R == 0) break;
                }
            }
            if (R > 0)
                for (int m = 0; m <= 8; ++m)
                    if (try_x(r + dg.eval(r) * pow_rat(Rat(p), 2 * m) * Rat(R * R))) return finish();
        }
    }
}

std::vector<Int> descent_primes(const Setup& s)
{
    std::set<Int> S{Int(2)};
    for (const Int& p : prime_divisors(s.minimal.discriminant().get_num())) S.insert(p);
    for (const Int& p : prime_divisors(s.d)) S.insert(p);
    return {S.begin(), S.end()};
}

ModRow xor_rows(const ModRow& a, const ModRow& b)
{
    ModRow out(a);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] ^= b[i];
    return out;
}

std::uint32_t dot(const ModRow& a, const ModRow& b)
{
    std::uint32_t s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s ^= (a[i] & b[i]);
    return s;
}

}  // namespace

PolyQ descent_cubic(const WeierstrassCurve& c) { return two_division_poly_integral(minimal_model(c)); }

std::shared_ptr<const EtaleAlgebra> descent_algebra(const PolyQ& g, const Int& field_cap)
{
    std::string key = g.to_string();
    {
        std::lock_guard<std::mutex> lock(algebra_mutex);
        auto it = algebra_cache.find(key);
        if (it != algebra_cache.end()) {
            for (std::size_t i = 0; i < it->second->component_count(); ++i)
                if (abs(it->second->field(i).discriminant()) > field_cap)
                    throw budget_error("field discriminant " + it->second->field(i).discriminant().get_str() +
                                       " exceeds the configured cap; supply external field data");
            return it->second;
        }
    }
    auto alg = std::make_shared<const EtaleAlgebra>(g, field_cap);
    std::lock_guard<std::mutex> lock(algebra_mutex);
    return algebra_cache.emplace(key, alg).first->second;
}

ModRow local_coordinates(const EtaleAlgebra& alg, const std::vector<FieldElt>& components, const Place& v)
{
    ModRow out;
    for (std::size_t i = 0; i < alg.component_count(); ++i) {
        ModRow part = component_coords(alg.field(i), components[i], v);
        out.insert(out.end(), part.begin(), part.end());
    }
    return out;
}

int local_image_target(const WeierstrassCurve& c, const Place& v, const Int& d)
{
    Setup s = make_setup(c, d, Int(1000000));
    return target_for(s.gd, v);
}

LocalImage local_image(const WeierstrassCurve& c, const Place& v, const Int& d, long budget, const Int& field_cap)
{
    return compute_local_image(make_setup(c, d, field_cap), v, budget);
}

SelmerResult two_selmer(const WeierstrassCurve& c, const Int& field_cap) { return two_selmer_twist(c, Int(1), field_cap); }

SelmerResult two_selmer_twist(const WeierstrassCurve& c, const Int& d, const Int& field_cap)
{
    Setup s = make_setup(c, d, field_cap);
    const EtaleAlgebra& alg = *s.alg;
    SelmerResult out;
    out.curve = s.minimal;
    out.d = s.d;
    out.S = descent_primes(s);
    out.torsion_floor = two_torsion_dim_from_roots(static_cast<int>(rational_roots(s.g).size()));

    std::vector<Place> places;
    for (const Int& p : out.S) places.push_back(Place::finite(p));
    places.push_back(Place::infinity());
    for (const Place& v : places) out.local_images.push_back(compute_local_image(s, v, 400000));

    SelmerFieldGroup K = selmer_field_group(alg, std::set<Int>(out.S.begin(), out.S.end()));

    // Per raw generator: norm coordinates in Q(S,2) and local coordinates at every place,
    // each restricted to the generator's own component.
    struct Unknown {
        std::size_t part;
        ModRow combo;
        ModRow norm_bits;
        std::vector<ModRow> local;  // per place, full ambient coordinates
    };
    std::vector<Unknown> unknowns;
    for (std::size_t i = 0; i < K.parts.size(); ++i) {
        const NumberField& F = alg.field(i);
        const auto& part = K.parts[i];
        // offsets of component i inside each ambient space
        std::vector<std::size_t> offset(places.size(), 0), width(places.size(), 0);
        for (std::size_t k = 0; k < places.size(); ++k) {
            std::size_t off = 0;
            for (std::size_t c = 0; c < alg.component_count(); ++c) {
                const NumberField& G = alg.field(c);
                std::size_t w = 0;
                if (places[k].is_infinite())
                    w = static_cast<std::size_t>(G.real_places());
                else
                    for (const auto& P : G.primes_above(places[k].prime())) w += static_cast<std::size_t>(G.local_class_dim(P));
                if (c == i) {
                    offset[k] = off;
                    width[k] = w;
                }
                off += w;
            }
        }
        std::vector<ModRow> gen_norm;
        std::vector<std::vector<ModRow>> gen_local;
        for (const auto& g : part.generators) {
            FieldElt a = F.from_integral(g.element);
            Int N = F.norm(g.element);
            ModRow nb{static_cast<std::uint32_t>(N < 0 ? 1 : 0)};
            for (const Int& p : out.S) nb.push_back(static_cast<std::uint32_t>(valuation(N, p) & 1));
            gen_norm.push_back(nb);
            std::vector<ModRow> locs;
            for (std::size_t k = 0; k < places.size(); ++k) {
                ModRow full(out.local_images[k].ambient_basis.size(), 0);
                ModRow mine = component_coords(F, a, places[k]);
                if (mine.size() != width[k]) throw precondition_error("local coordinate width mismatch");
                std::copy(mine.begin(), mine.end(), full.begin() + static_cast<long>(offset[k]));
                locs.push_back(full);
            }
            gen_local.push_back(locs);
        }
        for (const auto& combo : part.combos) {
            Unknown u{i, combo, ModRow(1 + out.S.size(), 0), {}};
            for (std::size_t k = 0; k < places.size(); ++k) u.local.emplace_back(out.local_images[k].ambient_basis.size(), 0);
            for (std::size_t j = 0; j < combo.size(); ++j) {
                if (!combo[j]) continue;
                u.norm_bits = xor_rows(u.norm_bits, gen_norm[j]);
                for (std::size_t k = 0; k < places.size(); ++k) u.local[k] = xor_rows(u.local[k], gen_local[j][k]);
            }
            unknowns.push_back(std::move(u));
        }
    }

    const std::size_t m = unknowns.size();
    std::vector<ModRow> system;
    for (std::size_t b = 0; b < 1 + out.S.size(); ++b) {
        ModRow row(m, 0);
        for (std::size_t j = 0; j < m; ++j) row[j] = unknowns[j].norm_bits[b];
        system.push_back(row);
    }
    for (std::size_t k = 0; k < places.size(); ++k) {
        const LocalImage& I = out.local_images[k];
        std::size_t amb = I.ambient_basis.size();
        std::vector<ModRow> ann;
        if (I.subspace.empty()) {
            for (std::size_t t = 0; t < amb; ++t) {
                ModRow e(amb, 0);
                e[t] = 1;
                ann.push_back(e);
            }
        } else {
            ann = kernel_mod(I.subspace, amb, 2);
        }
        for (const auto& y : ann) {
            ModRow row(m, 0);
            for (std::size_t j = 0; j < m; ++j) row[j] = dot(y, unknowns[j].local[k]);
            system.push_back(row);
        }
    }
    std::vector<ModRow> sol;
    if (m > 0) sol = kernel_mod(system, m, 2);
    out.dim = static_cast<int>(sol.size());
    if (out.dim < out.torsion_floor) throw precondition_error("Selmer dimension fell below the rational 2-torsion");

    for (const auto& v : sol) {
        SelmerClass cls;
        for (std::size_t i = 0; i < alg.component_count(); ++i) {
            const NumberField& F = alg.field(i);
            const auto& part = K.parts[i];
            ModRow bits(part.generators.size(), 0);
            for (std::size_t j = 0; j < m; ++j)
                if (v[j] && unknowns[j].part == i) bits = xor_rows(bits, unknowns[j].combo);
            FieldElt prod = F.from_integral(F.one());
            for (std::size_t g = 0; g < bits.size(); ++g)
                if (bits[g]) prod = F.mul(prod, F.from_integral(part.generators[g].element));
            cls.components.push_back(prod);
        }
        out.basis.push_back(std::move(cls));
    }
    return out;
}

int local_h1_dim(const WeierstrassCurve& c, const Place& v)
{
    PolyQ g = descent_cubic(c);
    int roots = count_roots_local(g, v);
    if (v.is_infinite()) return roots == 3 ? 2 : 0;
    int t = two_torsion_dim_from_roots(roots);
    return v.prime() == 2 ? 2 * t + 2 : 2 * t;
}

NearCompanionBound near_companion_constant(const WeierstrassCurve& c1, const WeierstrassCurve& c2,
                                           int congruence_constant)
{
    WeierstrassCurve m1 = minimal_model(c1), m2 = minimal_model(c2);
    std::set<Int> primes{Int(2)};
    for (const Int& n : {Int(m1.discriminant().get_num()), Int(m2.discriminant().get_num()), conductor(m1), conductor(m2)})
        for (const Int& p : prime_divisors(n)) primes.insert(p);
    NearCompanionBound out;
    for (const Int& p : primes) out.omega.push_back(Place::finite(p));
    out.omega.push_back(Place::infinity());
    for (const Place& v : out.omega) {
        out.c1 += 2 * local_h1_dim(m1, v);
        out.c2 += 2 * local_h1_dim(m2, v);
    }
    out.congruence_constant = congruence_constant;
    out.total = out.c1 + out.c2 + congruence_constant;
    return out;
}

}  // namespace selcomp
