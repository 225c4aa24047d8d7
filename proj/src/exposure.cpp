#include "creditworks/exposure.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "creditworks/csv.hpp"
#include "creditworks/errors.hpp"

namespace creditworks {
namespace {

void check_unit(double v, const char* what) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw DomainError(std::string(what) + " must lie in [0, 1]");
  }
}

}  // namespace

EadResult ead(const LoanExposure& loan) {
  EadResult out;
  out.outstanding = loan.funded_amount - loan.received_principal;
  if (out.outstanding < 0.0) {
    out.outstanding = 0.0;
    out.clamped = true;
  }
  if (loan.remaining_months) {
    out.remaining_months = std::max(0.0, std::floor(*loan.remaining_months));
  } else if (loan.funded_amount > 0.0) {
    out.remaining_months =
        std::ceil(loan.term_months * out.outstanding / loan.funded_amount);
  }
  out.ead = out.outstanding * (1.0 + loan.annual_rate * out.remaining_months / 12.0);
  return out;
}

double lgd(double ead, double recovery_rate) {
  check_unit(recovery_rate, "recovery rate");
  return ead * (1.0 - recovery_rate);
}

double expected_loss(double pd, double ead, double recovery_rate) {
  check_unit(pd, "probability of default");
  return pd * lgd(ead, recovery_rate);
}

ExposureQuote quote_exposure(double pd, double ead, double recovery_rate) {
  ExposureQuote q;
  q.pd = pd;
  q.ead = ead;
  q.recovery_rate = recovery_rate;
  q.lgd_amount = lgd(ead, recovery_rate);
  q.el = expected_loss(pd, ead, recovery_rate);
  return q;
}

double RecoveryTable::rate_for(const std::string& purpose) const {
  auto it = entries.find(purpose);
  return it == entries.end() ? overall_rate : it->second;
}

RecoveryTable recovery_rates(std::span<const ChargedOffLoan> loans) {
  if (loans.empty()) throw DataError("no charged-off loans to estimate recovery");
  struct Sums {
    double exposure = 0.0;
    double recoveries = 0.0;
  };
  std::map<std::string, Sums> by_purpose;
  Sums overall;
  for (const auto& loan : loans) {
    auto& s = by_purpose[loan.purpose];
    s.exposure += loan.exposure;
    s.recoveries += loan.recoveries;
    overall.exposure += loan.exposure;
    overall.recoveries += loan.recoveries;
  }
  if (!(overall.exposure > 0.0)) {
    throw DataError("charged-off loans carry no exposure");
  }
  RecoveryTable table;
  table.overall_rate = std::clamp(overall.recoveries / overall.exposure, 0.0, 1.0);
  for (const auto& [purpose, s] : by_purpose) {
    table.entries[purpose] = s.exposure > 0.0
                                 ? std::clamp(s.recoveries / s.exposure, 0.0, 1.0)
                                 : table.overall_rate;
  }
  return table;
}

void require_exposure_columns(const RawLoanTable& table,
                              const ExposureColumns& cols,
                              bool need_recoveries) {
  std::vector<std::string> needed = {cols.funded_amount, cols.received_principal,
                                     cols.rate, cols.term_months, cols.purpose};
  if (need_recoveries) needed.push_back(cols.recoveries);
  if (cols.remaining_months) needed.push_back(*cols.remaining_months);
  std::string missing;
  for (const auto& name : needed) {
    if (!table.find_column(name)) missing += (missing.empty() ? "" : ", ") + name;
  }
  if (!missing.empty()) {
    throw MissingExposureColumns("missing exposure columns: " + missing);
  }
}

LoanExposure loan_exposure(const RawLoanTable& table, std::size_t row,
                           const ExposureColumns& cols) {
  const auto number = [&](const std::string& name) {
    const auto& cell = table.rows[row][table.column_index(name)];
    const auto* v = std::get_if<double>(&cell);
    if (v == nullptr) {
      throw DataError("row " + std::to_string(table.source_rows[row]) +
                      ": column '" + name + "' has no numeric value");
    }
    return *v;
  };
  LoanExposure loan;
  loan.funded_amount = number(cols.funded_amount);
  loan.received_principal = number(cols.received_principal);
  loan.annual_rate = number(cols.rate) / (cols.rate_in_percent ? 100.0 : 1.0);
  loan.term_months = number(cols.term_months);
  if (cols.remaining_months) loan.remaining_months = number(*cols.remaining_months);
  return loan;
}

RecoveryTable recovery_rates(const RawLoanTable& table,
                             const ExposureColumns& cols) {
  require_exposure_columns(table, cols, true);
  const std::size_t target = table.target_index();
  const std::size_t purpose = table.column_index(cols.purpose);
  const std::size_t recoveries = table.column_index(cols.recoveries);
  std::vector<ChargedOffLoan> loans;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto* status = std::get_if<std::string>(&table.rows[r][target]);
    if (status == nullptr || terminal_label(*status) != 1) continue;
    ChargedOffLoan loan;
    if (const auto* p = std::get_if<std::string>(&table.rows[r][purpose])) {
      loan.purpose = *p;
    }
    loan.exposure = ead(loan_exposure(table, r, cols)).ead;
    const auto* rec = std::get_if<double>(&table.rows[r][recoveries]);
    loan.recoveries = rec != nullptr ? *rec : 0.0;
    loans.push_back(std::move(loan));
  }
  return recovery_rates(loans);
}

void write_exposure_csv(std::ostream& out, std::span<const std::string> ids,
                        std::span<const ExposureQuote> quotes) {
  if (ids.size() != quotes.size()) throw DimensionError("ids/quotes length mismatch");
  out << "id,pd,ead,recovery_rate,lgd,el\n";
  for (std::size_t i = 0; i < quotes.size(); ++i) {
    const auto& q = quotes[i];
    csv::write_row(out, {ids[i], csv::format_double(q.pd), csv::format_double(q.ead),
                         csv::format_double(q.recovery_rate),
                         csv::format_double(q.lgd_amount), csv::format_double(q.el)});
  }
}

}  // namespace creditworks
