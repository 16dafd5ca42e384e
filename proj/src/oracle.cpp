#include "mhs/oracle.hpp"

namespace mhs {

ExactSeries::ExactSeries(Composition c) : c_(std::move(c)) {
  h_.assign(c_.depth() + 1, mpq_class(0));
  h_[0] = 1;
}

void ExactSeries::advance() {
  ++n_;
  mpz_class j(static_cast<unsigned long>(n_));
  // Descending so that h_[i-1] is still the value at the previous n.
  for (unsigned i = c_.depth(); i >= 1; --i) {
    mpz_class denom;
    mpz_pow_ui(denom.get_mpz_t(), j.get_mpz_t(), c_.part(i));
    h_[i] += h_[i - 1] / mpq_class(denom);
  }
}

mpq_class exact_mhs(const Composition& c, u64 n) {
  ExactSeries series(c);
  while (series.n() < n) series.advance();
  return series.value();
}

Valuation exact_mhs_valuation(const Composition& c, u64 n, u64 p) {
  return rational_val(exact_mhs(c, n), p);
}

}  // namespace mhs
