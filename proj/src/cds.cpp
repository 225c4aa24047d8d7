#include "creditworks/cds.hpp"

#include <cmath>
#include <string>

#include "creditworks/errors.hpp"

namespace creditworks {
namespace {

void validate(const CdsTerms& t) {
  if (!(t.maturity_years > 0.0)) throw DomainError("CDS maturity must be positive");
  if (!(t.pd >= 0.0 && t.pd <= 1.0)) throw DomainError("pd must lie in [0, 1]");
  if (!(t.recovery_rate >= 0.0 && t.recovery_rate <= 1.0)) {
    throw DomainError("recovery rate must lie in [0, 1]");
  }
  if (!(t.notional >= 0.0)) throw DomainError("notional must be non-negative");
}

double annuity(const CdsTerms& t) {
  const double T = t.maturity_years;
  const double tau = T / 2.0;
  return (1.0 - t.pd) * T * discount(t.risk_free_rate, T) +
         t.pd * tau * discount(t.risk_free_rate, tau);
}

}  // namespace

double discount(double rate, double years) {
  if (years < 0.0) throw DomainError("discount horizon must be non-negative");
  return std::exp(-rate * years);
}

double protection_leg_value(const CdsTerms& terms) {
  validate(terms);
  const double tau = terms.maturity_years / 2.0;
  return terms.notional * (1.0 - terms.recovery_rate) * terms.pd *
         discount(terms.risk_free_rate, tau);
}

double premium_leg_value(const CdsTerms& terms, double spread) {
  validate(terms);
  return terms.notional * spread * annuity(terms);
}

CdsQuote fair_spread(const CdsTerms& terms) {
  validate(terms);
  const double tau = terms.maturity_years / 2.0;
  const double protection_per_unit =
      (1.0 - terms.recovery_rate) * terms.pd * discount(terms.risk_free_rate, tau);
  CdsQuote q;
  q.spread_per_annum = protection_per_unit / annuity(terms);
  q.spread_bps = q.spread_per_annum * 1e4;
  q.protection_leg_value = terms.notional * protection_per_unit;
  q.premium_leg_value = premium_leg_value(terms, q.spread_per_annum);
  return q;
}

CdsQuote price_for_loan(double pd, const ExposureQuote& exposure,
                        const LoanTerms& loan, double risk_free_rate) {
  if (!(loan.remaining_years > 0.0)) {
    throw DomainError("loan has no remaining term to protect");
  }
  return fair_spread({exposure.ead, loan.remaining_years, risk_free_rate, pd,
                      exposure.recovery_rate});
}

}  // namespace creditworks
