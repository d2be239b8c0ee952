#include "selcomp/cubicfield.hpp"

#include "selcomp/error.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

namespace selcomp {

namespace {

// Textbook LLL on a numeric Gram matrix; returns the unimodular transform (rows).
std::vector<std::vector<long>> lll_transform(const std::vector<std::vector<double>>& gram)
{
    std::size_t n = gram.size();
    std::vector<std::vector<long>> U(n, std::vector<long>(n, 0));
    for (std::size_t i = 0; i < n; ++i) U[i][i] = 1;
    auto inner = [&](std::size_t a, std::size_t b) {
        double s = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) s += static_cast<double>(U[a][i]) * gram[i][j] * static_cast<double>(U[b][j]);
        return s;
    };
    for (int guard = 0; guard < 1000; ++guard) {
        // Gram-Schmidt
        std::vector<std::vector<double>> mu(n, std::vector<double>(n, 0.0));
        std::vector<double> B(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            B[i] = inner(i, i);
            for (std::size_t j = 0; j < i; ++j) {
                double s = inner(i, j);
                for (std::size_t k = 0; k < j; ++k) s -= mu[j][k] * mu[i][k] * B[k];
                mu[i][j] = B[j] > 0 ? s / B[j] : 0.0;
                B[i] -= mu[i][j] * mu[i][j] * B[j];
            }
        }
        bool changed = false;
        for (std::size_t k = 1; k < n && !changed; ++k) {
            for (std::size_t j = k; j-- > 0;) {
                long q = std::lround(mu[k][j]);
                if (q != 0) {
                    for (std::size_t t = 0; t < n; ++t) U[k][t] -= q * U[j][t];
                    changed = true;
                }
            }
            if (changed) break;
            if (B[k] < (0.75 - mu[k][k - 1] * mu[k][k - 1]) * B[k - 1]) {
                std::swap(U[k], U[k - 1]);
                changed = true;
            }
        }
        if (!changed) break;
    }
    return U;
}

// Coefficient vectors with max-norm exactly r, first nonzero entry positive.
std::vector<std::vector<long>> shell(std::size_t n, long r)
{
    std::vector<std::vector<long>> out;
    if (r == 0) return out;
    std::vector<long> c(n, -r);
    for (;;) {
        long mx = 0;
        for (long x : c) mx = std::max(mx, std::labs(x));
        std::size_t first = 0;
        while (first < n && c[first] == 0) ++first;
        if (mx == r && first < n && c[first] > 0) out.push_back(c);
        std::size_t k = 0;
        while (k < n && c[k] == r) c[k++] = -r;
        if (k == n) break;
        ++c[k];
    }
    return out;
}

Int ceil_sqrt(const Int& n)
{
    Int s = isqrt(n);
    if (s * s < n) ++s;
    return s;
}

}  // namespace

SUnitEngine::SUnitEngine(std::shared_ptr<const NumberField> field, long search_budget)
    : field_(std::move(field)), budget_(search_budget)
{
    const NumberField& F = *field_;
    int n = F.degree();
    Rat factor = n == 1 ? Rat(1) : (n == 2 ? Rat(1, 2) : Rat(2, 9));
    for (int i = 0; i < F.complex_places(); ++i) factor *= Rat(12733, 10000);
    minkowski_ = factor * Rat(ceil_sqrt(abs(F.discriminant())));
    for (std::int64_t p : primes_up_to(floor_of(minkowski_).get_si())) base_primes_.emplace_back(p);
    for (const Int& p : base_primes_) ensure_prime(p);

    OrderElt minus_one = F.one();
    minus_one[0] = -1;
    torsion_ = minus_one;
    if (n == 2 && F.discriminant() == -4) {
        // a fourth root of unity generates the torsion modulo squares
        bool found = false;
        for (long a = -2; a <= 2 && !found; ++a)
            for (long b = -2; b <= 2 && !found; ++b) {
                OrderElt x{Int(a), Int(b)};
                OrderElt sq = F.mul(x, x);
                if (sq == minus_one) {
                    torsion_ = x;
                    found = true;
                }
            }
        if (!found) throw precondition_error("no fourth root of unity found in a field of discriminant -4");
    }
    add_candidate(torsion_);
    for (const Int& p : base_primes_) {
        OrderElt x = F.one();
        x[0] = p;
        add_candidate(x);
    }
}

std::size_t SUnitEngine::ensure_prime(const Int& p)
{
    if (rational_primes_.count(p)) return 0;
    rational_primes_.insert(p);
    for (const auto& P : field_->primes_above(p)) primes_.push_back(P);
    // character primes may not meet T
    bool dropped = false;
    for (std::size_t i = 0; i < chars_.size();) {
        if (Int(static_cast<unsigned long>(chars_[i].first)) == p) {
            chars_.erase(chars_.begin() + static_cast<long>(i));
            char_images_.erase(char_images_.begin() + static_cast<long>(i));
            dropped = true;
        } else {
            ++i;
        }
    }
    (void)dropped;
    gen_vectors_.clear();
    return 1;
}

bool SUnitEngine::smooth_norm(Int n) const
{
    n = abs(n);
    if (n == 0) return false;
    for (const Int& p : rational_primes_) {
        while (mpz_divisible_p(n.get_mpz_t(), p.get_mpz_t())) mpz_divexact(n.get_mpz_t(), n.get_mpz_t(), p.get_mpz_t());
        if (n == 1) return true;
    }
    return n == 1;
}

bool SUnitEngine::factor_over(const OrderElt& x, const Int& norm, Tracked& out)
{
    out.element = x;
    out.vals.clear();
    Int rest = abs(norm);
    for (std::size_t i = 0; i < primes_.size(); ++i) {
        const PrimeIdeal& P = primes_[i];
        if (!mpz_divisible_p(rest.get_mpz_t(), P.p.get_mpz_t())) continue;
        int v = field_->valuation(x, P);
        if (v) out.vals[i] = v;
    }
    // check: norms account for the valuations
    Int acc = 1;
    for (const auto& [i, v] : out.vals) acc *= pow_int(primes_[i].norm(), static_cast<unsigned long>(v));
    if (acc != rest) throw precondition_error("S-unit factorization does not match the norm");
    return true;
}

std::vector<std::uint8_t> SUnitEngine::char_vector(const OrderElt& x) const
{
    std::vector<std::uint8_t> out;
    for (std::size_t c = 0; c < chars_.size(); ++c) {
        std::uint64_t q = chars_[c].first;
        const auto& img = char_images_[c];
        Int Q(static_cast<unsigned long>(q)), acc = 0;
        for (std::size_t i = 0; i < x.size(); ++i) acc += x[i] * Int(static_cast<unsigned long>(img[i]));
        acc = mod_floor(acc, Q);
        int k = kronecker(acc, Q);
        if (k == 0) throw precondition_error("character evaluated at a prime in the support");
        out.push_back(k < 0 ? 1 : 0);
    }
    return out;
}

void SUnitEngine::add_character()
{
    const NumberField& F = *field_;
    for (;;) {
        Int q = next_prime(Int(static_cast<unsigned long>(next_char_q_)));
        next_char_q_ = q.get_ui();
        if (rational_primes_.count(q)) continue;
        if (mpz_divisible_p(F.index().get_mpz_t(), q.get_mpz_t())) continue;
        if (mpz_divisible_p(F.discriminant().get_mpz_t(), q.get_mpz_t())) continue;
        auto roots = roots_mod_p(reduce_mod_p(F.poly(), q));
        if (roots.empty()) continue;
        for (auto r : roots) {
            chars_.emplace_back(q.get_ui(), r);
            char_images_.push_back(F.basis_images(q.get_ui(), r));
        }
        gen_vectors_.clear();
        return;
    }
}

void SUnitEngine::add_candidate(const OrderElt& x)
{
    if (++spent_ > budget_) throw budget_error("S-unit search budget exhausted");
    while (chars_.size() < gens_.size() + 48) add_character();
    Int N = field_->norm(x);
    if (N == 0 || !smooth_norm(N)) return;
    Tracked t;
    factor_over(x, N, t);
    bool base_only = true;
    for (const auto& [i, v] : t.vals) {
        (void)v;
        if (!std::binary_search(base_primes_.begin(), base_primes_.end(), primes_[i].p)) base_only = false;
    }
    if (base_only && relations_.size() < 400) {
        bool dup = false;
        for (const auto& r : relations_)
            if (r.vals == t.vals) {
                dup = true;
                break;
            }
        if (!dup || t.vals.empty()) relations_.push_back(t);
        if (dup && !t.vals.empty()) {
            // equal valuation vectors: the quotient is a unit
            for (const auto& r : relations_) {
                if (r.vals != t.vals) continue;
                auto q = quotient(r.element, t.element);
                if (q && !is_trivial_unit(*q)) {
                    std::size_t nu = 0;
                    for (const auto& u : relations_) nu += u.vals.empty();
                    if (nu < 64) relations_.push_back(Tracked{*q, {}});
                }
                break;
            }
        }
    }
    // redundancy filter against (valuation parity, character) signatures
    auto signature = [&](const Tracked& g) {
        ModRow v(primes_.size() + chars_.size(), 0);
        for (const auto& [i, val] : g.vals) v[i] = static_cast<std::uint32_t>(val & 1);
        auto cv = char_vector(g.element);
        for (std::size_t c = 0; c < cv.size(); ++c) v[primes_.size() + c] = cv[c];
        return v;
    };
    if (gen_vectors_.empty() && !gens_.empty()) {
        std::vector<ModRow> all;
        for (const auto& g : gens_) all.push_back(signature(g));
        gen_vectors_ = row_echelon_mod(all, 2);
    }
    ModRow sig = signature(t);
    // reduce against the echelon rows
    for (const auto& row : gen_vectors_) {
        std::size_t piv = 0;
        while (piv < row.size() && row[piv] == 0) ++piv;
        if (piv < row.size() && sig[piv])
            for (std::size_t k = 0; k < sig.size(); ++k) sig[k] ^= row[k];
    }
    if (std::all_of(sig.begin(), sig.end(), [](std::uint32_t b) { return b == 0; })) return;
    gens_.push_back(t);
    gen_vectors_.push_back(sig);
    gen_vectors_ = row_echelon_mod(gen_vectors_, 2);
}

std::optional<OrderElt> SUnitEngine::quotient(const OrderElt& x, const OrderElt& y) const
{
    IntMatrix M = field_->mult_matrix(y);
    RatMatrix R(M.size());
    for (std::size_t i = 0; i < M.size(); ++i)
        for (const Int& v : M[i]) R[i].emplace_back(v);
    std::vector<Rat> xv(x.begin(), x.end());
    auto z = mul(xv, inverse(R));
    OrderElt out;
    for (const Rat& c : z) {
        if (c.get_den() != 1) return std::nullopt;
        out.push_back(c.get_num());
    }
    return out;
}

bool SUnitEngine::is_trivial_unit(const OrderElt& u) const
{
    for (std::size_t i = 1; i < u.size(); ++i)
        if (u[i] != 0) return u == torsion_;
    return abs(u[0]) == 1;
}

std::vector<std::vector<Int>> SUnitEngine::reduced_basis(const IntMatrix& lattice) const
{
    auto G = field_->t2_gram();
    std::size_t n = lattice.size();
    std::vector<std::vector<double>> gl(n, std::vector<double>(n, 0.0));
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) gl[a][b] += lattice[a][i].get_d() * G[i][j] * lattice[b][j].get_d();
    auto U = lll_transform(gl);
    std::vector<std::vector<Int>> out(n, std::vector<Int>(n, Int(0)));
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t j = 0; j < n; ++j) out[a][j] += U[a][k] * lattice[k][j];
    return out;
}

void SUnitEngine::search_box(int radius)
{
    std::size_t n = static_cast<std::size_t>(field_->degree());
    IntMatrix id(n, std::vector<Int>(n, Int(0)));
    for (std::size_t i = 0; i < n; ++i) id[i][i] = 1;
    auto basis = reduced_basis(id);
    for (const auto& c : shell(n, radius)) {
        OrderElt x(n, Int(0));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) x[j] += c[i] * basis[i][j];
        add_candidate(x);
    }
}

void SUnitEngine::search_in_prime(std::size_t prime_index, int radius)
{
    std::size_t n = static_cast<std::size_t>(field_->degree());
    auto basis = reduced_basis(primes_[prime_index].lattice);
    for (const auto& c : shell(n, radius)) {
        OrderElt x(n, Int(0));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) x[j] += c[i] * basis[i][j];
        add_candidate(x);
    }
}

SUnitEngine::SelmerBasis SUnitEngine::selmer_group(const std::set<Int>& S)
{
    std::lock_guard<std::mutex> lock(mutex_);
    const NumberField& F = *field_;
    for (const Int& p : S) {
        if (ensure_prime(p)) {
            OrderElt x = F.one();
            x[0] = p;
            add_candidate(x);
        }
    }
    for (int round = 0;; ++round) {
        while (chars_.size() < gens_.size() + 48) add_character();
        std::vector<std::size_t> outside;  // T minus S
        std::size_t s_count = 0;
        for (std::size_t i = 0; i < primes_.size(); ++i) {
            if (S.count(primes_[i].p))
                ++s_count;
            else
                outside.push_back(i);
        }
        std::size_t m = gens_.size();
        std::vector<ModRow> V;
        for (auto i : outside) {
            ModRow row(m, 0);
            for (std::size_t j = 0; j < m; ++j) {
                auto it = gens_[j].vals.find(i);
                if (it != gens_[j].vals.end()) row[j] = static_cast<std::uint32_t>(it->second & 1);
            }
            V.push_back(row);
        }
        std::size_t rankV = rank_mod(V, 2);
        auto K = V.empty() ? std::vector<ModRow>{} : kernel_mod(V, m, 2);
        if (V.empty()) {
            for (std::size_t j = 0; j < m; ++j) {
                ModRow e(m, 0);
                e[j] = 1;
                K.push_back(e);
            }
        }
        std::size_t upper = static_cast<std::size_t>(F.unit_rank()) + 1 + s_count + outside.size() - rankV;
        std::vector<std::vector<std::uint8_t>> gchars;
        for (const auto& g : gens_) gchars.push_back(char_vector(g.element));
        std::vector<ModRow> images;
        for (const auto& k : K) {
            ModRow v(chars_.size(), 0);
            for (std::size_t j = 0; j < m; ++j)
                if (k[j])
                    for (std::size_t c = 0; c < chars_.size(); ++c) v[c] ^= gchars[j][c];
            images.push_back(v);
        }
        auto chosen = independent_subset_mod(images, 2);
        if (chosen.size() > upper) throw precondition_error("S-unit certification: character rank exceeds the dimension bound");
        if (chosen.size() == upper) {
            SelmerBasis out;
            out.S.assign(S.begin(), S.end());
            for (const auto& g : gens_) out.generators.push_back({g.element});
            for (auto idx : chosen) out.combos.push_back(K[idx]);
            out.dimension = upper;
            return out;
        }
        // enlarge the generator pool
        search_box(++box_radius_);
        for (std::size_t i = 0; i < primes_.size(); ++i) {
            if (std::binary_search(base_primes_.begin(), base_primes_.end(), primes_[i].p)) continue;
            int& r = prime_search_radius_[i];
            search_in_prime(i, ++r);
        }
    }
}

SUnitEngine::ClassGroup SUnitEngine::class_group()
{
    std::lock_guard<std::mutex> lock(mutex_);
    const NumberField& F = *field_;
    std::vector<std::size_t> fb;
    for (std::size_t i = 0; i < primes_.size(); ++i)
        if (std::binary_search(base_primes_.begin(), base_primes_.end(), primes_[i].p)) fb.push_back(i);
    int r = F.unit_rank();
    ClassGroup out;
    {
        FieldElt t = F.from_integral(torsion_);
        out.torsion_unit = t;
    }
    Int prev_h = -1;
    int stable = 0;
    for (int round = 0; round < 200; ++round) {
        while (chars_.size() < gens_.size() + 48) add_character();
        IntMatrix rel;
        for (const auto& t : relations_) {
            std::vector<Int> row(fb.size(), Int(0));
            for (std::size_t k = 0; k < fb.size(); ++k) {
                auto it = t.vals.find(fb[k]);
                if (it != t.vals.end()) row[k] = it->second;
            }
            rel.push_back(row);
        }
        Int h = 0;
        SmithForm snf;
        bool full = true;
        if (fb.empty()) {
            h = 1;
        } else {
            snf = smith_form(rel, fb.size());
            h = 1;
            for (const Int& d : snf.diagonal) {
                if (d == 0) full = false;
                h *= d;
            }
        }
        // units among relations
        std::vector<OrderElt> units;
        for (const auto& t : relations_)
            if (t.vals.empty() && t.element != torsion_) units.push_back(t.element);
        std::vector<ModRow> unit_sigs{ModRow()};
        {
            auto tv = char_vector(torsion_);
            unit_sigs[0] = ModRow(tv.begin(), tv.end());
        }
        std::vector<OrderElt> chosen_units;
        for (const auto& u : units) {
            auto cv = char_vector(u);
            unit_sigs.push_back(ModRow(cv.begin(), cv.end()));
            if (rank_mod(unit_sigs, 2) == unit_sigs.size())
                chosen_units.push_back(u);
            else
                unit_sigs.pop_back();
            if (static_cast<int>(chosen_units.size()) == r) break;
        }
        bool units_ok = static_cast<int>(chosen_units.size()) == r;
        if (full && units_ok && h == prev_h) ++stable;
        else stable = 0;
        prev_h = full ? h : Int(-1);
        if (full && units_ok && (stable >= 2 || h == 1)) {
            out.h = h;
            out.units.clear();
            for (const auto& u : chosen_units) out.units.push_back(F.from_integral(u));
            out.units_saturated = true;
            if (!fb.empty()) {
                for (std::size_t k = 0; k < snf.diagonal.size(); ++k) {
                    const Int& d = snf.diagonal[k];
                    if (d <= 1) continue;
                    out.invariants.push_back(d);
                    if (mpz_even_p(d.get_mpz_t())) ++out.two_rank;
                    std::string g;
                    for (std::size_t j = 0; j < fb.size(); ++j) {
                        Int c = snf.generators[k][j];
                        if (c == 0) continue;
                        if (!g.empty()) g += " * ";
                        g += "P" + std::to_string(j) + "[" + primes_[fb[j]].p.get_str() + "]^" + c.get_str();
                    }
                    out.generators.push_back(g);
                }
            }
            // certify each l-part: elementary, and l-rank bounded below by l-power characters
            bool cert = true;
            for (const auto& [l, e] : factor_integer(h)) {
                int lrank = 0;
                for (const Int& d : out.invariants) {
                    if (mpz_divisible_p(d.get_mpz_t(), l.get_mpz_t())) ++lrank;
                    if (mpz_divisible_p(d.get_mpz_t(), Int(l * l).get_mpz_t())) cert = false;
                }
                if (!cert || l > 1000) {
                    cert = false;
                    break;
                }
                auto L = static_cast<std::uint32_t>(l.get_ui());
                // formal kernel: combinations with valuations divisible by l on the factor base
                std::vector<OrderElt> elts{torsion_};
                std::vector<std::map<std::size_t, int>> vals{{}};
                for (const auto& t : relations_) {
                    elts.push_back(t.element);
                    vals.push_back(t.vals);
                }
                std::size_t m = elts.size();
                std::vector<ModRow> V;
                for (auto i : fb) {
                    ModRow row(m, 0);
                    for (std::size_t j = 0; j < m; ++j) {
                        auto it = vals[j].find(i);
                        if (it != vals[j].end()) row[j] = static_cast<std::uint32_t>(mod_floor(Int(it->second), l).get_ui());
                    }
                    V.push_back(row);
                }
                auto K = kernel_mod(V, m, L);
                // l-th power characters at degree-1 primes q = 1 mod l
                std::vector<ModRow> images(K.size());
                int nchars = 0;
                Int q = 1000;
                while (nchars < static_cast<int>(m) + 40) {
                    q = next_prime(q);
                    if (mpz_divisible_p(Int(q - 1).get_mpz_t(), l.get_mpz_t()) == 0) continue;
                    if (rational_primes_.count(q) || mpz_divisible_p(F.index().get_mpz_t(), q.get_mpz_t()) ||
                        mpz_divisible_p(F.discriminant().get_mpz_t(), q.get_mpz_t()))
                        continue;
                    auto roots = roots_mod_p(reduce_mod_p(F.poly(), q));
                    if (roots.empty()) continue;
                    // generator of mu_l in F_q
                    Int g = 2, ex = (q - 1) / l, zeta;
                    for (;; ++g) {
                        mpz_powm(zeta.get_mpz_t(), g.get_mpz_t(), ex.get_mpz_t(), q.get_mpz_t());
                        if (zeta != 1) break;
                    }
                    for (auto rt : roots) {
                        auto img = F.basis_images(q.get_ui(), rt);
                        std::vector<std::uint32_t> ev;
                        for (const auto& x : elts) {
                            Int acc = 0;
                            for (std::size_t i = 0; i < x.size(); ++i) acc += x[i] * Int(static_cast<unsigned long>(img[i]));
                            acc = mod_floor(acc, q);
                            Int pw;
                            mpz_powm(pw.get_mpz_t(), acc.get_mpz_t(), ex.get_mpz_t(), q.get_mpz_t());
                            std::uint32_t dl = 0;
                            Int z = 1;
                            while (z != pw) {
                                z = mod_floor(Int(z * zeta), q);
                                ++dl;
                                if (dl > L) throw precondition_error("discrete log failed");
                            }
                            ev.push_back(dl);
                        }
                        for (std::size_t k = 0; k < K.size(); ++k) {
                            std::uint64_t s = 0;
                            for (std::size_t j = 0; j < m; ++j) s += static_cast<std::uint64_t>(K[k][j]) * ev[j];
                            images[k].push_back(static_cast<std::uint32_t>(s % L));
                        }
                        ++nchars;
                    }
                }
                int t_l = (l == 2 || (l == 3 && F.discriminant() == -3)) ? 1 : 0;
                int lower = static_cast<int>(rank_mod(images, L)) - r - t_l;
                if (lower < lrank) cert = false;
            }
            out.certified = cert;
            if (cert || round > 60) return out;
        }
        search_box(++box_radius_);
    }
    throw budget_error("class group computation did not stabilise");
}

}  // namespace selcomp
