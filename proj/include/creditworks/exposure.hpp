#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "creditworks/dataset.hpp"

namespace creditworks {

// Contract fields needed to value one loan.
struct LoanExposure {
  double funded_amount = 0.0;
  double received_principal = 0.0;
  double annual_rate = 0.0;  // fraction, e.g. 0.1356
  double term_months = 0.0;
  // Months left on the note. When absent it is estimated from the unpaid
  // share of principal: ceil(term * outstanding / funded).
  std::optional<double> remaining_months;
};

struct EadResult {
  double ead = 0.0;
  double outstanding = 0.0;
  double remaining_months = 0.0;
  bool clamped = false;  // outstanding principal was negative
};

// Outstanding principal plus simple interest at the note rate over the
// remaining whole months: EAD = P * (1 + rate * months / 12).
EadResult ead(const LoanExposure& loan);

// Loss amount EAD * (1 - R). Throws DomainError for R outside [0, 1].
double lgd(double ead, double recovery_rate);

// pd * EAD * (1 - R). Throws DomainError for pd outside [0, 1].
double expected_loss(double pd, double ead, double recovery_rate);

struct ExposureQuote {
  double pd = 0.0;
  double ead = 0.0;
  double recovery_rate = 0.0;
  double lgd_amount = 0.0;
  double el = 0.0;
};

ExposureQuote quote_exposure(double pd, double ead, double recovery_rate);

struct ChargedOffLoan {
  std::string purpose;
  double exposure = 0.0;
  double recoveries = 0.0;
};

struct RecoveryTable {
  std::map<std::string, double> entries;
  double overall_rate = 0.0;

  double rate_for(const std::string& purpose) const;
};

// Per purpose R = sum(recoveries) / sum(exposure), clamped to [0, 1]; a
// purpose whose exposure sums to zero uses the overall rate. Throws
// DataError when the list is empty or total exposure is zero.
RecoveryTable recovery_rates(std::span<const ChargedOffLoan> loans);

// Names of the columns that feed the exposure calculations.
struct ExposureColumns {
  std::string id = "id";
  std::string funded_amount = "funded_amnt";
  std::string received_principal = "total_rec_prncp";
  std::string rate = "int_rate";
  bool rate_in_percent = true;
  std::string term_months = "term";
  std::string recoveries = "recoveries";
  std::string purpose = "purpose";
  std::optional<std::string> remaining_months;
};

// Throws MissingExposureColumns listing every required column the table
// lacks (recoveries included only when `need_recoveries`).
void require_exposure_columns(const RawLoanTable& table,
                              const ExposureColumns& cols,
                              bool need_recoveries);

// Throws DataError when a required cell is missing or not numeric.
LoanExposure loan_exposure(const RawLoanTable& table, std::size_t row,
                           const ExposureColumns& cols);

// Charged Off rows of `table`, with exposure = EAD of each loan.
RecoveryTable recovery_rates(const RawLoanTable& table,
                             const ExposureColumns& cols);

// CSV with header "id,pd,ead,recovery_rate,lgd,el".
void write_exposure_csv(std::ostream& out, std::span<const std::string> ids,
                        std::span<const ExposureQuote> quotes);

}  // namespace creditworks
