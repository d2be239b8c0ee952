#pragma once

// Number fields of degree <= 3 and the cubic etale algebra Q[x]/(g): maximal
// orders, prime decomposition, local square classes, S-units modulo squares
// and class groups.

#include "selcomp/arith.hpp"
#include "selcomp/linalg.hpp"
#include "selcomp/poly.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace selcomp {

/// Element of a number field in power-basis coordinates (length = degree).
using FieldElt = std::vector<Rat>;
/// Element of the maximal order in integral-basis coordinates.
using OrderElt = std::vector<Int>;

/// Canonical coordinates of (O/P^(2e+1))* modulo squares for a prime above 2.
struct TwoAdicTable {
    IntMatrix modulus;           // HNF of P^(2e+1) in integral-basis coordinates
    std::vector<int> class_of;   // residue index -> bit vector, -1 for non-units
    int dim = 0;                 // e f + 1
};

struct PrimeIdeal {
    Int p;
    int e = 1;
    int f = 1;
    IntMatrix lattice;  // HNF basis in integral-basis coordinates
    /// beta * P is inside pO and beta is not in pO.
    OrderElt beta;
    std::shared_ptr<const TwoAdicTable> two_adic;
    Int norm() const { return pow_int(p, static_cast<unsigned long>(f)); }
    std::string to_string() const;
};

class NumberField {
public:
    /// f monic, integral, irreducible over Q, degree 1..3.
    explicit NumberField(const PolyQ& f);

    int degree() const { return n_; }
    const PolyQ& poly() const { return f_; }
    const Int& discriminant() const { return disc_; }
    /// [O : Z[theta]]
    const Int& index() const { return index_; }
    int real_places() const { return static_cast<int>(real_roots_.size()); }
    int complex_places() const { return (n_ - real_places()) / 2; }
    int unit_rank() const { return real_places() + complex_places() - 1; }
    /// Rows are the integral basis in power-basis coordinates; the first row is 1.
    const RatMatrix& integral_basis() const { return basis_; }

    std::vector<Rat> to_integral(const FieldElt& a) const;
    FieldElt from_integral(const OrderElt& a) const;
    /// Reduces a polynomial in theta modulo f.
    FieldElt from_poly(const PolyQ& a) const;
    PolyQ to_poly(const FieldElt& a) const;

    OrderElt mul(const OrderElt& a, const OrderElt& b) const;
    FieldElt mul(const FieldElt& a, const FieldElt& b) const;
    OrderElt one() const;
    /// Rows: a * omega_i in integral coordinates.
    IntMatrix mult_matrix(const OrderElt& a) const;
    Int norm(const OrderElt& a) const;
    Rat norm(const FieldElt& a) const;
    /// Characteristic polynomial of multiplication by a.
    PolyQ char_poly(const OrderElt& a) const;

    /// Primes above p with e and f; computed once and cached.
    std::vector<PrimeIdeal> primes_above(const Int& p) const;
    bool contains(const PrimeIdeal& P, const OrderElt& x) const;
    /// v_P of a nonzero element of O; u receives the unit part x beta^v / p^v.
    int valuation(const OrderElt& x, const PrimeIdeal& P, OrderElt* unit_part = nullptr) const;
    int valuation(const FieldElt& a, const PrimeIdeal& P) const;

    /// Coordinates of a in F_P^* / squares: (v_P mod 2, unit class bits).
    std::vector<std::uint8_t> local_class(const FieldElt& a, const PrimeIdeal& P) const;
    int local_class_dim(const PrimeIdeal& P) const;
    /// One bit per real embedding: 1 when a is negative there.
    std::vector<std::uint8_t> real_signs(const FieldElt& a) const;

    /// Nonzero element of O mod q at a degree-1 prime (q, r) with q not dividing the index.
    std::uint64_t reduce_at(const OrderElt& a, std::uint64_t q, std::uint64_t r) const;
    /// Images of the integral basis at theta = r modulo q.
    std::vector<std::uint64_t> basis_images(std::uint64_t q, std::uint64_t r) const;

    /// Numeric T2 Gram matrix of the integral basis (search heuristics only).
    std::vector<std::vector<double>> t2_gram() const;

private:
    void build_maximal_order();
    void set_basis(RatMatrix basis);
    std::vector<PrimeIdeal> compute_primes(const Int& p) const;
    void finish_prime(PrimeIdeal& P) const;
    IntMatrix ideal_lattice(const Int& p, const std::vector<OrderElt>& gens) const;
    IntMatrix ideal_product(const IntMatrix& a, const IntMatrix& b, const Int& bound) const;

    PolyQ f_;
    int n_ = 0;
    RatMatrix basis_;
    RatMatrix basis_inv_;
    std::vector<std::vector<OrderElt>> table_;  // omega_i * omega_j
    Int disc_;
    Int index_;
    std::vector<RootInterval> real_roots_;
    mutable std::mutex cache_mutex_;
    mutable std::map<Int, std::vector<PrimeIdeal>> prime_cache_;
};

/// Square-class data of a number field: S-units modulo squares, built from
/// smooth elements and certified by a dimension count against quadratic characters.
class SUnitEngine {
public:
    explicit SUnitEngine(std::shared_ptr<const NumberField> field, long search_budget = 200000);

    const NumberField& field() const { return *field_; }
    const Rat& minkowski_bound() const { return minkowski_; }
    const std::vector<Int>& factor_base_primes() const { return base_primes_; }

    struct Generator {
        OrderElt element;
    };
    /// A basis of F(S,2) as F2 combinations of raw generators.
    struct SelmerBasis {
        std::vector<Int> S;
        std::vector<Generator> generators;
        std::vector<ModRow> combos;  // each over generators
        std::size_t dimension = 0;
    };
    SelmerBasis selmer_group(const std::set<Int>& S);

    struct ClassGroup {
        Int h;
        std::vector<Int> invariants;  // nontrivial cyclic factors
        std::vector<std::string> generators;
        int two_rank = 0;
        bool certified = false;
        std::vector<FieldElt> units;
        FieldElt torsion_unit;
        bool units_saturated = false;
    };
    ClassGroup class_group();

private:
    struct Tracked {
        OrderElt element;
        std::map<std::size_t, int> vals;  // prime index -> valuation
    };
    std::size_t ensure_prime(const Int& p);
    bool factor_over(const OrderElt& x, const Int& norm, Tracked& out);
    bool smooth_norm(Int n) const;
    void add_candidate(const OrderElt& x);
    void add_character();
    std::vector<std::uint8_t> char_vector(const OrderElt& x) const;
    void search_box(int radius);
    void search_in_prime(std::size_t prime_index, int radius);
    std::vector<std::vector<Int>> reduced_basis(const IntMatrix& lattice) const;
    /// x / y when it lies in O.
    std::optional<OrderElt> quotient(const OrderElt& x, const OrderElt& y) const;
    bool is_trivial_unit(const OrderElt& u) const;

    std::shared_ptr<const NumberField> field_;
    long budget_;
    long spent_ = 0;
    Rat minkowski_;
    std::vector<Int> base_primes_;    // rational primes <= Minkowski bound
    std::set<Int> rational_primes_;   // all rational primes below tracked ideals
    std::vector<PrimeIdeal> primes_;  // T
    std::vector<Tracked> gens_;
    std::vector<ModRow> gen_vectors_;  // parity vectors + characters, for redundancy filtering
    std::vector<Tracked> relations_;   // integral relations for the class group
    std::vector<std::pair<std::uint64_t, std::uint64_t>> chars_;
    std::vector<std::vector<std::uint64_t>> char_images_;
    std::uint64_t next_char_q_ = 1000;
    int box_radius_ = 0;
    std::map<std::size_t, int> prime_search_radius_;
    OrderElt torsion_;
    std::mutex mutex_;
};

struct ClassUnitData {
    PolyQ defining_poly;
    RatMatrix integral_basis;
    Int field_discriminant;
    Int class_number;
    std::vector<Int> class_group_invariants;
    int class_group_2rank = 0;
    std::vector<std::string> class_gens;
    std::vector<FieldElt> fundamental_units;
    FieldElt torsion_unit;
    bool certified = false;
    std::string source = "computed";
};

/// Integral basis and field discriminant only.
ClassUnitData maximal_order(const PolyQ& g);
ClassUnitData class_group_and_units(const PolyQ& f, const Int& cap = Int(1000000));
ClassUnitData class_unit_data_from_json(const std::string& text);
std::string class_unit_data_to_json(const ClassUnitData& d);

struct IdealFactor {
    PrimeIdeal prime;
    int residue_degree = 1;
    int ramification_index = 1;
};
std::vector<IdealFactor> ideal_factor(const NumberField& f, const Int& p);

/// A = Q[x]/(g) for a monic integral separable cubic g, split into its Q-irreducible factors.
class EtaleAlgebra {
public:
    explicit EtaleAlgebra(const PolyQ& g, const Int& cap = Int(1000000));

    const PolyQ& poly() const { return g_; }
    std::size_t component_count() const { return factors_.size(); }
    const PolyQ& factor(std::size_t i) const { return factors_[i]; }
    const NumberField& field(std::size_t i) const { return engines_[i]->field(); }
    SUnitEngine& engine(std::size_t i) const { return *engines_[i]; }

    /// Component images of a polynomial in theta.
    std::vector<FieldElt> components(const PolyQ& a) const;

private:
    PolyQ g_;
    std::vector<PolyQ> factors_;
    std::vector<std::shared_ptr<SUnitEngine>> engines_;
};

/// K(S,2) of the algebra as the direct sum of its components' groups.
struct SelmerFieldGroup {
    std::vector<Int> S;
    /// Per component: generators and F2 combinations forming a basis.
    std::vector<SUnitEngine::SelmerBasis> parts;
    std::size_t dimension = 0;
};
SelmerFieldGroup selmer_field_group(const EtaleAlgebra& alg, const std::set<Int>& S);

/// Shared engine for a defining polynomial; engines are cached process-wide.
std::shared_ptr<SUnitEngine> field_engine(const PolyQ& f, const Int& cap = Int(1000000));

}  // namespace selcomp
