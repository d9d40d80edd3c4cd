#include "ma/signs.hpp"

#include "ma/base.hpp"

namespace ma::signs {

Sign relation_entry_sign(Deg j, Deg k, Deg l, const DegreeVector& degs, Convention c) {
  if (static_cast<Deg>(degs.size()) < j) fail(Err::IndexOutOfRange, "degree vector shorter than j");
  Deg s = 0;
  for (Deg i = 0; i < j; ++i) s += degs[static_cast<size_t>(i)];
  Deg lead = (c == Convention::Keller) ? j + k * l : j * k + l;
  return sign_pow(lead + (2 - k) * s);
}

Sign relation_entry_sign(Deg j, Deg k, Deg l, const DegreeVector& degs) {
  return relation_entry_sign(j, k, l, degs, Convention::Keller);
}

Sign morphism_rhs_sign(const std::vector<Deg>& partition, Convention c) {
  if (partition.empty()) fail(Err::InvalidArity, "empty partition");
  const Deg r = static_cast<Deg>(partition.size());
  Deg eps = 0;
  if (c == Convention::Keller) {
    for (Deg j = 1; j <= r; ++j) eps += (r - j) * (partition[static_cast<size_t>(j - 1)] - 1);
  } else {
    Deg prefix = 0;
    for (Deg j = 1; j <= r; ++j) {
      prefix += partition[static_cast<size_t>(j - 1)];
      eps += (1 - partition[static_cast<size_t>(j - 1)]) * prefix;
    }
  }
  return sign_pow(eps);
}

Sign boundary_component_sign(Deg n, Deg j, const std::vector<Deg>& stable_dims) {
  if (static_cast<Deg>(stable_dims.size()) < j) fail(Err::IndexOutOfRange, "stable_dims shorter than j");
  Deg eps = n + j - 1;
  for (Deg i = 0; i < j; ++i) eps += stable_dims[static_cast<size_t>(i)] - n;
  return sign_pow(eps);
}

Sign md_prefactor(const DegreeVector& degs, PrefactorStrategy s) {
  const Deg d = static_cast<Deg>(degs.size());
  if (d < 1) fail(Err::InvalidArity, "md_prefactor needs d >= 1");
  switch (s) {
    case PrefactorStrategy::None:
      return +1;
    case PrefactorStrategy::Weighted: {
      Deg e = 0;
      for (Deg i = 2; i <= d; ++i) e += (i - 1) * degs[static_cast<size_t>(i - 1)];
      return sign_pow(e);
    }
    case PrefactorStrategy::Literal: {
      if (d == 1) return +1;
      Deg e = (d - 1) * degs[static_cast<size_t>(d - 1)];
      if (d >= 2) e += degs[static_cast<size_t>(d - 2)];  // + |x_{d-1}|
      if (d >= 3) e += (d - 2) * degs[static_cast<size_t>(d - 3)];
      return sign_pow(e);
    }
  }
  fail(Err::Internal, "unreachable");
}

}  // namespace ma::signs
