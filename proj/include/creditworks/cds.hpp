#pragma once

#include "creditworks/exposure.hpp"

namespace creditworks {

// Continuously compounded discount factor exp(-r t). Throws DomainError
// for t < 0.
double discount(double rate, double years);

// Single-payment protection contract on one loan.
struct CdsTerms {
  double notional = 0.0;        // the loan's EAD
  double maturity_years = 0.0;  // T > 0
  double risk_free_rate = 0.0;  // per annum, continuous compounding
  double pd = 0.0;              // probability of default before T
  double recovery_rate = 0.0;
};

struct CdsQuote {
  double spread_per_annum = 0.0;
  double spread_bps = 0.0;
  double premium_leg_value = 0.0;
  double protection_leg_value = 0.0;
};

// One premium payment, made at T if the loan survives or at the default
// time otherwise; defaults are assumed to happen mid-period, tau = T / 2.
// Per unit notional:
//   protection    = (1 - R) * pd * D(tau)
//   premium(s)    = s * [(1 - pd) * T * D(T) + pd * tau * D(tau)]
// The fair spread equates the two.
double protection_leg_value(const CdsTerms& terms);
double premium_leg_value(const CdsTerms& terms, double spread);

// Throws DomainError for T <= 0 or pd / R outside [0, 1].
CdsQuote fair_spread(const CdsTerms& terms);

struct LoanTerms {
  double remaining_years = 0.0;
  double note_rate = 0.0;  // already reflected in the EAD notional
};

CdsQuote price_for_loan(double pd, const ExposureQuote& exposure,
                        const LoanTerms& loan, double risk_free_rate);

}  // namespace creditworks
