#include "ma/base.hpp"

#include <cstdlib>

namespace ma {

const char* err_name(Err e) {
  switch (e) {
    case Err::InvalidArity: return "InvalidArity";
    case Err::NotInteriorEdge: return "NotInteriorEdge";
    case Err::NotCodimOne: return "NotCodimOne";
    case Err::IndexOutOfRange: return "IndexOutOfRange";
    case Err::MissingOperation: return "MissingOperation";
    case Err::NotAComplex: return "NotAComplex";
    case Err::PreconditionFailed: return "PreconditionFailed";
    case Err::GradingViolation: return "GradingViolation";
    case Err::Mismatch: return "Mismatch";
    case Err::DegenerateConfiguration: return "DegenerateConfiguration";
    case Err::PerturbationFailed: return "PerturbationFailed";
    case Err::DimensionMismatch: return "DimensionMismatch";
    case Err::ParseError: return "ParseError";
    case Err::Internal: return "Internal";
  }
  return "Unknown";
}

std::string rat_str(const Rat& r) {
  const Int num = boost::multiprecision::numerator(r);
  const Int den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

Rat rat_parse(const std::string& s) {
  if (s.empty()) fail(Err::ParseError, "empty rational");
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) {
      return Rat(Int(s));
    }
    Int num(s.substr(0, slash));
    Int den(s.substr(slash + 1));
    if (den == 0) fail(Err::ParseError, "zero denominator in '" + s + "'");
    return Rat(num, den);
  } catch (const std::exception&) {
    fail(Err::ParseError, "bad rational '" + s + "'");
  }
}

int env_thread_cap() {
  const char* v = std::getenv("MORSE_AINFTY_THREADS");
  if (!v) return 1;
  int n = std::atoi(v);
  return n < 1 ? 1 : n;
}

}  // namespace ma
