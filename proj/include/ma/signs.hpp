#pragma once

// Sign formulas for the A-infinity relations, morphism relations (both the
// Keller-style and the LH-style convention), orientation/boundary signs and
// the pluggable product prefactor. Signs are plain +1/-1 ints so they compose
// directly with counts.

#include <vector>

namespace ma::signs {

using Sign = int;
using Deg = long long;
using DegreeVector = std::vector<Deg>;

enum class Convention { Keller, LH };

enum class PrefactorStrategy {
  Weighted,  // sum_{i=2..d} (i-1)*|x_i|   (default; calibrated by the defect tests)
  Literal,   // (d-1)|x_d| + (d-2)|x_{d-2}| + |x_{d-1}|, the terms as printed
  None,      // +1
};

inline Sign sign_pow(Deg e) { return (e % 2 + 2) % 2 == 0 ? +1 : -1; }

// (-1)^{j + k*l}
inline Sign relation_sign(Deg j, Deg k, Deg l) { return sign_pow(j + k * l); }

// (-1)^{j*k + l} (the LH counterpart of relation_sign)
inline Sign relation_sign_lh(Deg j, Deg k, Deg l) { return sign_pow(j * k + l); }

// (-1)^{j + kl + (2-k) * sum_{i<=j} degs_i}
Sign relation_entry_sign(Deg j, Deg k, Deg l, const DegreeVector& degs);
// Same with the LH leading term jk + l.
Sign relation_entry_sign(Deg j, Deg k, Deg l, const DegreeVector& degs, Convention c);

// (-1)^{l + j*k}
inline Sign morphism_lhs_sign(Deg j, Deg k, Deg l) { return sign_pow(l + j * k); }

// Keller: eps = sum_{j=1}^r (r-j)(i_j - 1);  LH: eps = sum_j (1-i_j) * sum_{k<=j} i_k
Sign morphism_rhs_sign(const std::vector<Deg>& partition, Convention c);

// (-1)^{i(i-1)/2}
inline Sign convention_convert_sign(Deg i) { return sign_pow(i * (i - 1) / 2); }

// eps_j = n + j - 1 + sum_{i<=j} (dim W^s(x_i) - n)
Sign boundary_component_sign(Deg n, Deg j, const std::vector<Deg>& stable_dims);

Sign md_prefactor(const DegreeVector& degs, PrefactorStrategy s = PrefactorStrategy::Weighted);

// (-1)^{a*b}
inline Sign koszul_swap_sign(Deg a, Deg b) { return sign_pow(a * b); }

}  // namespace ma::signs
