#pragma once

// Complete 2-descent over Q through the cubic etale algebra A = Q[T]/(g),
// where g(X) = X^3 + b2 X^2 + 8 b4 X + 16 b6 comes from the minimal model.
// The twist by d uses Y^2 = g_d(X) = d^3 g(X/d) and the map (X, Y) -> X - d T.

#include "selcomp/arith.hpp"
#include "selcomp/cubicfield.hpp"
#include "selcomp/curve.hpp"

#include <memory>
#include <string>
#include <vector>

namespace selcomp {

/// Image of E^d(Q_v)/2E^d(Q_v) inside A_v^* / squares.
struct LocalImage {
    Place place = Place::infinity();
    /// One label per coordinate of A_v^*/squares, e.g. "K1:(2, e=1, f=1):val".
    std::vector<std::string> ambient_basis;
    /// Row echelon basis of the image, rows of length ambient_basis.size().
    std::vector<ModRow> subspace;
    /// X-coordinates (on Y^2 = g_d(X)) of the sampled points whose classes span the image.
    std::vector<Rat> sample_x;
    int dim = 0;
};

/// dim E^d(Q_v)[2] for odd v, that plus 1 at v = 2, and 1 or 0 at the real place by the sign of disc.
int local_image_target(const WeierstrassCurve& c, const Place& v, const Int& d = Int(1));

/// Raises a budget error when the sampled span stops short of the target dimension.
LocalImage local_image(const WeierstrassCurve& c, const Place& v, const Int& d = Int(1), long budget = 400000,
                       const Int& field_cap = Int(1000000));

/// A class of A^*/squares given by one representative per component field.
struct SelmerClass {
    std::vector<FieldElt> components;
};

struct SelmerResult {
    WeierstrassCurve curve;  // minimal model of the untwisted input
    Int d = 1;
    std::vector<Int> S;
    int dim = 0;
    std::vector<SelmerClass> basis;
    int torsion_floor = 0;
    std::vector<LocalImage> local_images;  // one per place of S and the real place
};

/// field_cap bounds |disc| of every component field of the descent algebra.
SelmerResult two_selmer(const WeierstrassCurve& c, const Int& field_cap = Int(1000000));
/// d is reduced to its squarefree part.
SelmerResult two_selmer_twist(const WeierstrassCurve& c, const Int& d, const Int& field_cap = Int(1000000));

/// The descent cubic g of the minimal model of c.
PolyQ descent_cubic(const WeierstrassCurve& c);
/// Process-wide algebra for a descent cubic; twists of one curve share it.
std::shared_ptr<const EtaleAlgebra> descent_algebra(const PolyQ& g, const Int& field_cap = Int(1000000));

/// Coordinates of a class of A^* in A_v^*/squares, in the order of LocalImage::ambient_basis.
ModRow local_coordinates(const EtaleAlgebra& alg, const std::vector<FieldElt>& components, const Place& v);

/// dim H^1(Q_v, E[2]).
int local_h1_dim(const WeierstrassCurve& c, const Place& v);

struct NearCompanionBound {
    std::vector<Place> omega;  // places dividing disc1 disc2 N1 N2 2, and the real place
    int c1 = 0;                // 2 * sum of local_h1_dim for the first curve
    int c2 = 0;
    int congruence_constant = 0;
    int total = 0;
};
NearCompanionBound near_companion_constant(const WeierstrassCurve& c1, const WeierstrassCurve& c2,
                                           int congruence_constant = 0);

}  // namespace selcomp
