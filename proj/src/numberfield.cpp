#include "selcomp/cubicfield.hpp"

#include "selcomp/error.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

namespace selcomp {

namespace {

Int lcm_of_denominators(const std::vector<Rat>& v)
{
    Int d = 1;
    for (const Rat& x : v) mpz_lcm(d.get_mpz_t(), d.get_mpz_t(), x.get_den().get_mpz_t());
    return d;
}

// x modulo an upper-triangular full-rank HNF lattice, coordinates in [0, H_ii)
OrderElt reduce_mod_lattice(OrderElt x, const IntMatrix& h)
{
    for (std::size_t i = 0; i < h.size(); ++i) {
        Int q = floor_div(x[i], h[i][i]);
        if (q != 0)
            for (std::size_t k = i; k < x.size(); ++k) x[k] -= q * h[i][k];
    }
    return x;
}

bool is_zero(const OrderElt& x)
{
    return std::all_of(x.begin(), x.end(), [](const Int& c) { return c == 0; });
}

OrderElt mod_vec(OrderElt x, const Int& m)
{
    for (Int& c : x) c = mod_floor(c, m);
    return x;
}

}  // namespace

std::string PrimeIdeal::to_string() const
{
    std::ostringstream os;
    os << "(" << p.get_str() << ", e=" << e << ", f=" << f << ", [";
    for (std::size_t i = 0; i < lattice.size(); ++i) {
        if (i) os << ";";
        for (std::size_t j = 0; j < lattice[i].size(); ++j) os << (j ? "," : "") << lattice[i][j].get_str();
    }
    os << "])";
    return os.str();
}

NumberField::NumberField(const PolyQ& f) : f_(f), n_(f.degree())
{
    if (n_ < 1 || n_ > 3) throw precondition_error("number fields of degree 1..3 only");
    if (!f.is_monic() || !f.has_integer_coeffs()) throw precondition_error("defining polynomial must be monic integral");
    if (n_ > 1 && !rational_roots(f).empty()) throw precondition_error("defining polynomial is reducible: " + f.to_string());
    RatMatrix id(static_cast<std::size_t>(n_), std::vector<Rat>(static_cast<std::size_t>(n_), Rat(0)));
    for (int i = 0; i < n_; ++i) id[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 1;
    set_basis(id);
    build_maximal_order();
    real_roots_ = isolate_real_roots(f_);
}

void NumberField::set_basis(RatMatrix basis)
{
    std::size_t n = static_cast<std::size_t>(n_);
    Int D = 1;
    for (const auto& row : basis) mpz_lcm(D.get_mpz_t(), D.get_mpz_t(), lcm_of_denominators(row).get_mpz_t());
    IntMatrix m;
    for (const auto& row : basis) {
        std::vector<Int> r(n);
        for (std::size_t j = 0; j < n; ++j) r[n - 1 - j] = Int(row[j] * D);
        m.push_back(r);
    }
    m = hnf(m);
    if (m.size() != n) throw precondition_error("order basis has wrong rank");
    basis_.assign(n, std::vector<Rat>(n, Rat(0)));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            Rat v(m[n - 1 - i][n - 1 - j], D);
            v.canonicalize();
            basis_[i][j] = v;
        }
    basis_inv_ = inverse(basis_);
    table_.assign(n, std::vector<OrderElt>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            FieldElt prod = mul(basis_[i], basis_[j]);
            std::vector<Rat> c = to_integral(prod);
            OrderElt o(n);
            for (std::size_t k = 0; k < n; ++k) {
                if (c[k].get_den() != 1) throw precondition_error("basis does not span an order");
                o[k] = c[k].get_num();
            }
            table_[i][j] = o;
        }
    Rat det = 1;
    for (std::size_t i = 0; i < n; ++i) det *= basis_[i][i];
    Rat idx = abs(1 / det);
    index_ = idx.get_num();
    Rat d = n_ == 1 ? Rat(1) : selcomp::discriminant(f_);
    disc_ = Int(d.get_num()) / (index_ * index_);
}

std::vector<Rat> NumberField::to_integral(const FieldElt& a) const { return selcomp::mul(a, basis_inv_); }

FieldElt NumberField::from_integral(const OrderElt& a) const
{
    std::vector<Rat> v(a.begin(), a.end());
    return selcomp::mul(v, basis_);
}

FieldElt NumberField::from_poly(const PolyQ& a) const
{
    PolyQ r = divmod(a, f_).remainder;
    FieldElt out(static_cast<std::size_t>(n_), Rat(0));
    for (int i = 0; i < n_; ++i) out[static_cast<std::size_t>(i)] = r.coeff(i);
    return out;
}

PolyQ NumberField::to_poly(const FieldElt& a) const { return PolyQ(a); }

FieldElt NumberField::mul(const FieldElt& a, const FieldElt& b) const { return from_poly(PolyQ(a) * PolyQ(b)); }

OrderElt NumberField::mul(const OrderElt& a, const OrderElt& b) const
{
    std::size_t n = static_cast<std::size_t>(n_);
    OrderElt out(n, Int(0));
    for (std::size_t i = 0; i < n; ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < n; ++j) {
            if (b[j] == 0) continue;
            Int c = a[i] * b[j];
            for (std::size_t k = 0; k < n; ++k) out[k] += c * table_[i][j][k];
        }
    }
    return out;
}

OrderElt NumberField::one() const
{
    OrderElt o(static_cast<std::size_t>(n_), Int(0));
    o[0] = 1;
    return o;
}

IntMatrix NumberField::mult_matrix(const OrderElt& a) const
{
    std::size_t n = static_cast<std::size_t>(n_);
    IntMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
        OrderElt e(n, Int(0));
        e[i] = 1;
        m[i] = mul(a, e);
    }
    return m;
}

Int NumberField::norm(const OrderElt& a) const
{
    IntMatrix m = mult_matrix(a);
    switch (n_) {
    case 1: return m[0][0];
    case 2: return m[0][0] * m[1][1] - m[0][1] * m[1][0];
    default:
        return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
               m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    }
}

Rat NumberField::norm(const FieldElt& a) const
{
    std::vector<Rat> c = to_integral(a);
    Int D = lcm_of_denominators(c);
    OrderElt x;
    for (const Rat& v : c) x.push_back(Int(v * D));
    return Rat(norm(x)) / Rat(pow_int(D, static_cast<unsigned long>(n_)));
}

PolyQ NumberField::char_poly(const OrderElt& a) const
{
    IntMatrix m = mult_matrix(a);
    if (n_ == 1) return PolyQ({Rat(-m[0][0]), Rat(1)});
    if (n_ == 2) {
        Int tr = m[0][0] + m[1][1];
        Int det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        return PolyQ({Rat(det), Rat(-tr), Rat(1)});
    }
    Int tr = m[0][0] + m[1][1] + m[2][2];
    Int s2 = m[0][0] * m[1][1] - m[0][1] * m[1][0] + m[0][0] * m[2][2] - m[0][2] * m[2][0] + m[1][1] * m[2][2] -
             m[1][2] * m[2][1];
    Int det = norm(a);
    return PolyQ({Rat(-det), Rat(s2), Rat(-tr), Rat(1)});
}

// ---------------------------------------------------------------- maximal order

void NumberField::build_maximal_order()
{
    if (n_ == 1) return;
    std::size_t n = static_cast<std::size_t>(n_);
    Int df = Int(selcomp::discriminant(f_).get_num());
    for (const auto& [p, k] : factor_integer(df)) {
        if (k < 2) continue;
        if (p > Int(2000000000)) throw budget_error("maximal order: prime " + p.get_str() + " too large");
        auto pp = static_cast<std::uint32_t>(p.get_ui());
        for (;;) {
            if (!mpz_divisible_p(Int(df / (index_ * index_)).get_mpz_t(), Int(p * p).get_mpz_t())) break;
            // p-radical: kernel of x -> x^(p^j) on O/pO
            Int q = p;
            while (q < n_) q *= p;
            std::vector<ModRow> frob_cols(n, ModRow(n, 0));
            for (std::size_t i = 0; i < n; ++i) {
                OrderElt e(n, Int(0));
                e[i] = 1;
                OrderElt r = one(), b = e;
                Int ex = q;
                while (ex > 0) {
                    if (mpz_odd_p(ex.get_mpz_t())) r = mod_vec(mul(r, b), p);
                    b = mod_vec(mul(b, b), p);
                    ex >>= 1;
                }
                for (std::size_t k = 0; k < n; ++k) frob_cols[k][i] = static_cast<std::uint32_t>(r[k].get_ui());
            }
            auto rad = kernel_mod(frob_cols, n, pp);
            IntMatrix gens;
            for (std::size_t i = 0; i < n; ++i) {
                std::vector<Int> row(n, Int(0));
                row[i] = p;
                gens.push_back(row);
            }
            for (const auto& v : rad) gens.push_back(std::vector<Int>(v.begin(), v.end()));
            IntMatrix I = hnf(gens);
            RatMatrix Iq(n, std::vector<Rat>(n));
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) Iq[i][j] = I[i][j];
            RatMatrix Iinv = inverse(Iq);
            // y in O/pO with y*I inside pI
            std::vector<ModRow> cond;
            std::vector<std::vector<std::uint32_t>> cols(n);
            for (std::size_t i = 0; i < n; ++i) {
                OrderElt e(n, Int(0));
                e[i] = 1;
                for (std::size_t k = 0; k < n; ++k) {
                    OrderElt z = mul(e, I[k]);
                    std::vector<Rat> zq(z.begin(), z.end());
                    std::vector<Rat> c = selcomp::mul(zq, Iinv);
                    for (const Rat& x : c) {
                        if (x.get_den() != 1) throw precondition_error("round 2: radical is not an ideal");
                        cols[i].push_back(static_cast<std::uint32_t>(mod_floor(Int(x.get_num()), p).get_ui()));
                    }
                }
            }
            for (std::size_t r = 0; r < n * n; ++r) {
                ModRow row(n);
                for (std::size_t i = 0; i < n; ++i) row[i] = cols[i][r];
                cond.push_back(row);
            }
            auto ker = kernel_mod(cond, n, pp);
            if (ker.empty()) break;
            IntMatrix g2;
            for (std::size_t i = 0; i < n; ++i) {
                std::vector<Int> row(n, Int(0));
                row[i] = p;
                g2.push_back(row);
            }
            for (const auto& v : ker) g2.push_back(std::vector<Int>(v.begin(), v.end()));
            IntMatrix L = hnf(g2);
            RatMatrix nb;
            for (const auto& row : L) {
                std::vector<Rat> r(n);
                for (std::size_t j = 0; j < n; ++j) r[j] = Rat(row[j], p);
                for (auto& x : r) x.canonicalize();
                nb.push_back(selcomp::mul(r, basis_));
            }
            Int old_index = index_;
            set_basis(nb);
            if (index_ == old_index) break;
        }
    }
}

// ---------------------------------------------------------------- primes

IntMatrix NumberField::ideal_lattice(const Int& p, const std::vector<OrderElt>& gens) const
{
    std::size_t n = static_cast<std::size_t>(n_);
    IntMatrix rows;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<Int> r(n, Int(0));
        r[i] = p;
        rows.push_back(r);
    }
    for (const auto& g : gens)
        for (std::size_t i = 0; i < n; ++i) {
            OrderElt e(n, Int(0));
            e[i] = 1;
            rows.push_back(mul(g, e));
        }
    return hnf(rows);
}

IntMatrix NumberField::ideal_product(const IntMatrix& a, const IntMatrix& b, const Int& bound) const
{
    std::size_t n = static_cast<std::size_t>(n_);
    IntMatrix rows;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<Int> r(n, Int(0));
        r[i] = bound;
        rows.push_back(r);
    }
    for (const auto& x : a)
        for (const auto& y : b) rows.push_back(mul(x, y));
    return hnf(rows);
}

bool NumberField::contains(const PrimeIdeal& P, const OrderElt& x) const { return is_zero(reduce_mod_lattice(x, P.lattice)); }

void NumberField::finish_prime(PrimeIdeal& P) const
{
    std::size_t n = static_cast<std::size_t>(n_);
    auto pp = static_cast<std::uint32_t>(P.p.get_ui());
    // beta: y with y * w_k in pO for every lattice row w_k
    std::vector<ModRow> cond;
    for (const auto& w : P.lattice) {
        std::vector<ModRow> cols(n);
        IntMatrix rowsk;
        for (std::size_t i = 0; i < n; ++i) {
            OrderElt e(n, Int(0));
            e[i] = 1;
            rowsk.push_back(mul(e, w));
        }
        for (std::size_t k = 0; k < n; ++k) {
            ModRow r(n);
            for (std::size_t i = 0; i < n; ++i) r[i] = static_cast<std::uint32_t>(mod_floor(rowsk[i][k], P.p).get_ui());
            cond.push_back(r);
        }
    }
    auto ker = kernel_mod(cond, n, pp);
    if (ker.empty()) throw precondition_error("prime ideal without anti-uniformizer");
    P.beta = OrderElt(ker[0].begin(), ker[0].end());
    if (P.p == 2) {
        auto t = std::make_shared<TwoAdicTable>();
        IntMatrix pw = P.lattice;
        for (int k = 1; k < 2 * P.e + 1; ++k) pw = ideal_product(pw, P.lattice, Int(8));
        t->modulus = pw;
        std::vector<Int> radix;
        std::size_t total = 1;
        for (std::size_t i = 0; i < n; ++i) {
            radix.push_back(pw[i][i]);
            total *= pw[i][i].get_ui();
        }
        auto index_of = [&](const OrderElt& x) {
            OrderElt r = reduce_mod_lattice(x, pw);
            std::size_t idx = 0;
            for (std::size_t i = n; i-- > 0;) idx = idx * radix[i].get_ui() + r[i].get_ui();
            return idx;
        };
        auto elt_of = [&](std::size_t idx) {
            OrderElt x(n);
            for (std::size_t i = 0; i < n; ++i) {
                x[i] = static_cast<unsigned long>(idx % radix[i].get_ui());
                idx /= radix[i].get_ui();
            }
            return x;
        };
        t->class_of.assign(total, -1);
        std::vector<std::size_t> units;
        for (std::size_t i = 0; i < total; ++i)
            if (!contains(P, elt_of(i))) units.push_back(i);
        std::vector<int> code(total, -2);
        for (auto u : units) code[u] = -1;
        for (auto u : units) {
            OrderElt x = elt_of(u);
            code[index_of(mul(x, x))] = 0;
        }
        int bits = 0;
        for (auto u : units) {
            if (code[u] != -1) continue;
            OrderElt x = elt_of(u);
            std::vector<std::pair<std::size_t, int>> assign;
            for (auto y : units)
                if (code[y] >= 0) assign.emplace_back(index_of(mul(x, elt_of(y))), code[y] | (1 << bits));
            for (auto& [z, c] : assign) code[z] = c;
            ++bits;
        }
        if (bits != P.e * P.f + 1) throw precondition_error("2-adic unit square classes have unexpected dimension");
        for (std::size_t i = 0; i < total; ++i) t->class_of[i] = code[i] >= 0 ? code[i] : -1;
        t->dim = bits;
        P.two_adic = t;
    }
}

std::vector<PrimeIdeal> NumberField::compute_primes(const Int& p) const
{
    std::size_t n = static_cast<std::size_t>(n_);
    if (p > Int(2000000000)) throw budget_error("prime decomposition: prime too large");
    std::vector<PrimeIdeal> out;
    if (n_ == 1) {
        PrimeIdeal P;
        P.p = p;
        P.lattice = {{p}};
        finish_prime(P);
        out.push_back(P);
        return out;
    }
    // generator gamma of O with p not dividing [O : Z[gamma]]
    OrderElt gamma;
    PolyQ chi;
    bool found = false;
    {
        std::vector<Rat> th = to_integral(from_poly(PolyQ({Rat(0), Rat(1)})));
        OrderElt t0;
        for (const Rat& x : th) t0.push_back(x.get_num());
        std::vector<OrderElt> cands{t0};
        for (int r = 1; r <= 3 && cands.size() < 400; ++r) {
            std::vector<int> c(n, -r);
            for (;;) {
                int mx = 0;
                for (std::size_t i = 1; i < n; ++i) mx = std::max(mx, std::abs(c[i]));
                if (mx == r) {
                    OrderElt g(n);
                    for (std::size_t i = 0; i < n; ++i) g[i] = c[i];
                    cands.push_back(g);
                }
                std::size_t k = 0;
                while (k < n && c[k] == r) c[k++] = -r;
                if (k == n) break;
                ++c[k];
            }
        }
        for (const auto& g : cands) {
            PolyQ cp = char_poly(g);
            Rat d = selcomp::discriminant(cp);
            if (d == 0) continue;
            Rat q = d / Rat(disc_);
            if (q.get_den() != 1) continue;
            Int idx2 = q.get_num();
            if (mpz_divisible_p(idx2.get_mpz_t(), p.get_mpz_t())) continue;
            gamma = g;
            chi = cp;
            found = true;
            break;
        }
    }
    if (found) {
        for (const auto& fac : factor_mod_p(chi, p)) {
            OrderElt hg(n, Int(0)), pw = one();
            for (std::size_t k = 0; k < fac.factor.c.size(); ++k) {
                Int coef(static_cast<unsigned long>(fac.factor.c[k]));
                for (std::size_t i = 0; i < n; ++i) hg[i] += coef * pw[i];
                pw = mul(pw, gamma);
            }
            PrimeIdeal P;
            P.p = p;
            P.e = fac.multiplicity;
            P.f = fac.factor.degree();
            P.lattice = ideal_lattice(p, {hg});
            finish_prime(P);
            out.push_back(P);
        }
    } else {
        // common index divisor: enumerate ring maps O -> F_p
        if (p > 50) throw budget_error("prime decomposition failed at " + p.get_str());
        unsigned long P0 = p.get_ui();
        unsigned long total = 1;
        for (std::size_t i = 0; i < n; ++i) total *= P0;
        for (unsigned long code = 0; code < total; ++code) {
            std::vector<unsigned long> img(n);
            unsigned long c = code;
            for (std::size_t i = 0; i < n; ++i) {
                img[i] = c % P0;
                c /= P0;
            }
            if (img[0] != 1) continue;
            bool hom = true;
            for (std::size_t i = 0; i < n && hom; ++i)
                for (std::size_t j = 0; j < n && hom; ++j) {
                    Int lhs = 0;
                    for (std::size_t k = 0; k < n; ++k) lhs += table_[i][j][k] * img[k];
                    if (mod_floor(lhs, p) != Int(img[i] * img[j] % P0)) hom = false;
                }
            if (!hom) continue;
            std::vector<ModRow> rows{ModRow(n)};
            for (std::size_t i = 0; i < n; ++i) rows[0][i] = static_cast<std::uint32_t>(img[i]);
            auto ker = kernel_mod(rows, n, static_cast<std::uint32_t>(P0));
            IntMatrix gens;
            for (std::size_t i = 0; i < n; ++i) {
                std::vector<Int> r(n, Int(0));
                r[i] = p;
                gens.push_back(r);
            }
            for (const auto& v : ker) gens.push_back(std::vector<Int>(v.begin(), v.end()));
            PrimeIdeal P;
            P.p = p;
            P.lattice = hnf(gens);
            finish_prime(P);
            out.push_back(P);
        }
        if (static_cast<int>(out.size()) != n_) throw budget_error("prime decomposition failed at " + p.get_str());
    }
    int total = 0;
    for (const auto& P : out) total += P.e * P.f;
    if (total != n_) throw precondition_error("prime decomposition does not account for the degree");
    return out;
}

std::vector<PrimeIdeal> NumberField::primes_above(const Int& p) const
{
    {
        std::lock_guard<std::mutex> lock(cache_mutex_);
        auto it = prime_cache_.find(p);
        if (it != prime_cache_.end()) return it->second;
    }
    auto primes = compute_primes(p);
    std::lock_guard<std::mutex> lock(cache_mutex_);
    return prime_cache_.emplace(p, primes).first->second;
}

int NumberField::valuation(const OrderElt& x0, const PrimeIdeal& P, OrderElt* unit_part) const
{
    if (is_zero(x0)) throw precondition_error("valuation of zero");
    OrderElt x = x0;
    int v = 0;
    while (contains(P, x)) {
        x = mul(x, P.beta);
        for (Int& c : x) {
            if (!mpz_divisible_p(c.get_mpz_t(), P.p.get_mpz_t())) throw precondition_error("valuation: inexact division");
            mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), P.p.get_mpz_t());
        }
        ++v;
    }
    if (unit_part) *unit_part = x;
    return v;
}

int NumberField::valuation(const FieldElt& a, const PrimeIdeal& P) const
{
    std::vector<Rat> c = to_integral(a);
    Int D = lcm_of_denominators(c);
    OrderElt x;
    for (const Rat& v : c) x.push_back(Int(v * D));
    return valuation(x, P) - P.e * selcomp::valuation(D, P.p);
}

int NumberField::local_class_dim(const PrimeIdeal& P) const { return P.p == 2 ? 1 + P.two_adic->dim : 2; }

std::vector<std::uint8_t> NumberField::local_class(const FieldElt& a, const PrimeIdeal& P) const
{
    std::vector<Rat> c = to_integral(a);
    Int D = lcm_of_denominators(c);
    Int D2 = D * D;
    OrderElt x;
    for (const Rat& v : c) x.push_back(Int(v * D2));
    OrderElt u;
    int v = valuation(x, P, &u);
    std::vector<std::uint8_t> out{static_cast<std::uint8_t>(v & 1)};
    std::size_t n = static_cast<std::size_t>(n_);
    if (P.p == 2) {
        const TwoAdicTable& t = *P.two_adic;
        OrderElt r = reduce_mod_lattice(u, t.modulus);
        std::size_t idx = 0;
        for (std::size_t i = n; i-- > 0;) idx = idx * t.modulus[i][i].get_ui() + r[i].get_ui();
        int code = t.class_of[idx];
        if (code < 0) throw precondition_error("2-adic class lookup hit a non-unit");
        for (int b = 0; b < t.dim; ++b) out.push_back(static_cast<std::uint8_t>((code >> b) & 1));
        return out;
    }
    Int ex = (P.norm() - 1) / 2;
    OrderElt w = one(), b = mod_vec(u, P.p);
    while (ex > 0) {
        if (mpz_odd_p(ex.get_mpz_t())) w = mod_vec(mul(w, b), P.p);
        b = mod_vec(mul(b, b), P.p);
        ex >>= 1;
    }
    OrderElt wm = w, wp = w;
    wm[0] -= 1;
    wp[0] += 1;
    if (contains(P, wm)) {
        out.push_back(0);
    } else if (contains(P, wp)) {
        out.push_back(1);
    } else {
        throw precondition_error("Euler criterion failed in the residue field");
    }
    return out;
}

std::vector<std::uint8_t> NumberField::real_signs(const FieldElt& a) const
{
    std::vector<std::uint8_t> out;
    PolyQ pa(a);
    for (RootInterval iv : real_roots_) {
        int s = sign_at_root(pa, f_, iv);
        if (s == 0) throw precondition_error("element vanishes at a real embedding");
        out.push_back(s < 0 ? 1 : 0);
    }
    return out;
}

std::vector<std::uint64_t> NumberField::basis_images(std::uint64_t q, std::uint64_t r) const
{
    Int Q(static_cast<unsigned long>(q)), R(static_cast<unsigned long>(r));
    std::vector<std::uint64_t> out;
    for (const auto& row : basis_) {
        Rat v = PolyQ(row).eval(Rat(R));
        Int num = mod_floor(Int(v.get_num()), Q), den = mod_floor(Int(v.get_den()), Q), inv;
        if (mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), Q.get_mpz_t()) == 0)
            throw precondition_error("character prime divides a basis denominator");
        out.push_back(mod_floor(Int(num * inv), Q).get_ui());
    }
    return out;
}

std::uint64_t NumberField::reduce_at(const OrderElt& a, std::uint64_t q, std::uint64_t r) const
{
    auto img = basis_images(q, r);
    Int Q(static_cast<unsigned long>(q)), acc = 0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * Int(static_cast<unsigned long>(img[i]));
    return mod_floor(acc, Q).get_ui();
}

std::vector<std::vector<double>> NumberField::t2_gram() const
{
    std::vector<std::complex<double>> roots;
    for (RootInterval iv : real_roots_) {
        refine_root(f_, iv, Rat(1, 1000000000) / 1000000000);
        roots.emplace_back(Rat((iv.lo + iv.hi) / 2).get_d(), 0.0);
    }
    if (static_cast<int>(roots.size()) < n_) {
        // one conjugate pair: deflate by the real root (if any)
        std::vector<double> c;
        for (const Rat& x : f_.coeffs()) c.push_back(x.get_d());
        double b, cc;
        if (n_ == 2) {
            b = c[1];
            cc = c[0];
        } else {
            double rho = roots[0].real();
            b = c[2] + rho;
            cc = c[1] + rho * b;
        }
        std::complex<double> s = std::sqrt(std::complex<double>(b * b - 4 * cc, 0.0));
        roots.push_back((-b + s) / 2.0);
        roots.push_back((-b - s) / 2.0);
    }
    std::size_t n = static_cast<std::size_t>(n_);
    std::vector<std::vector<std::complex<double>>> emb(n);
    for (std::size_t i = 0; i < n; ++i)
        for (const auto& r : roots) {
            std::complex<double> acc = 0, pw = 1;
            for (std::size_t k = 0; k < n; ++k) {
                acc += basis_[i][k].get_d() * pw;
                pw *= r;
            }
            emb[i].push_back(acc);
        }
    std::vector<std::vector<double>> g(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t s = 0; s < roots.size(); ++s) g[i][j] += (emb[i][s] * std::conj(emb[j][s])).real();
    return g;
}

std::vector<IdealFactor> ideal_factor(const NumberField& f, const Int& p)
{
    std::vector<IdealFactor> out;
    for (const auto& P : f.primes_above(p)) out.push_back({P, P.f, P.e});
    return out;
}

}  // namespace selcomp
