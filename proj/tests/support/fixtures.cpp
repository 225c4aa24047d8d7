#include "support/fixtures.hpp"

#include <cmath>
#include <sstream>

#include "creditworks/csv.hpp"
#include "creditworks/logreg.hpp"
#include "creditworks/rng.hpp"

using creditworks::DesignMatrix;
using creditworks::Rng;

namespace fixtures {

DesignMatrix gaussian_blobs(std::size_t n, double separation, std::uint64_t seed) {
  Rng rng(seed);
  DesignMatrix m;
  m.columns = {"x0", "x1"};
  for (std::size_t i = 0; i < n; ++i) {
    const int label = static_cast<int>(i % 2);
    const double centre = label == 1 ? separation : 0.0;
    m.x.push_back(centre + rng.normal());
    m.x.push_back(centre + rng.normal());
    m.y.push_back(label);
    m.row_ids.push_back(std::to_string(i + 1));
  }
  return m;
}

DesignMatrix noisy_xor(std::size_t n, double flip, std::uint64_t seed) {
  Rng rng(seed);
  DesignMatrix m;
  m.columns = {"x0", "x1"};
  for (std::size_t i = 0; i < n; ++i) {
    const double a = 2.0 * rng.uniform() - 1.0;
    const double b = 2.0 * rng.uniform() - 1.0;
    int label = (a > 0.0) != (b > 0.0) ? 1 : 0;
    if (rng.uniform() < flip) label = 1 - label;
    m.x.push_back(a);
    m.x.push_back(b);
    m.y.push_back(label);
    m.row_ids.push_back(std::to_string(i + 1));
  }
  return m;
}

DesignMatrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed,
                           int levels) {
  Rng rng(seed);
  DesignMatrix m;
  for (std::size_t c = 0; c < cols; ++c) m.columns.push_back("f" + std::to_string(c));
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      m.x.push_back(levels > 0 ? static_cast<double>(rng.below(static_cast<std::uint64_t>(levels)))
                               : 2.0 * rng.uniform() - 1.0);
    }
    m.y.push_back(static_cast<int>(rng.below(2)));
    m.row_ids.push_back(std::to_string(r + 1));
  }
  return m;
}

std::string loan_book_csv(const LoanBookOptions& o) {
  Rng rng(o.seed);
  std::ostringstream out;
  out << "id,loan_amnt,funded_amnt,term,int_rate,grade,sub_grade,emp_title,"
         "emp_length,home_ownership,annual_inc,dti,open_acc,total_acc,"
         "fico_range_low,issue_d,purpose,title,loan_status,recoveries,"
         "total_rec_prncp\n";
  const char* purposes[] = {"car", "credit_card", "debt_consolidation", "house",
                            "small_business"};
  const char* homes[] = {"MORTGAGE", "OWN", "RENT"};
  for (std::size_t i = 0; i < o.rows; ++i) {
    const int grade = static_cast<int>(rng.below(7));  // A..G
    const int sub = 1 + static_cast<int>(rng.below(5));
    const double int_rate = 5.0 + 3.5 * grade + rng.uniform() * 3.0;
    const double dti = 30.0 * rng.uniform();
    const double annual_inc =
        i % 97 == 5 ? 1'500'000.0 : 20'000.0 + 130'000.0 * rng.uniform();
    const int open_acc = i % 89 == 3 ? 45 : 2 + static_cast<int>(rng.below(25));
    const int total_acc = i % 83 == 7 ? 90 : open_acc + static_cast<int>(rng.below(30));
    const double amount = 1000.0 * static_cast<double>(1 + rng.below(35));
    const int term = rng.below(3) == 0 ? 60 : 36;
    const char* purpose = purposes[rng.below(5)];
    const double logit = -6.5 + 0.22 * int_rate + 0.05 * dti + 0.25 * grade;
    const double u = rng.uniform();
    bool defaulted = u < creditworks::sigmoid(logit);
    if (o.single_class) defaulted = false;

    std::string status = defaulted ? "Charged Off" : "Fully Paid";
    double received = defaulted ? amount * (0.2 + 0.5 * rng.uniform()) : amount;
    double recoveries = defaulted ? (amount - received) * 0.09 * rng.uniform() * 2.0 : 0.0;
    if (o.include_current && i % 11 == 4) {
      status = i % 22 == 4 ? "Current" : "Late (31-120 days)";
      received = amount * 0.4 * rng.uniform();
      recoveries = 0.0;
    }
    const bool blank_dti = o.include_missing && i % 37 == 0;
    const bool blank_home = o.include_missing && i % 41 == 2;

    const char grade_letter = static_cast<char>('A' + grade);
    std::vector<std::string> row = {
        std::to_string(100000 + i),
        creditworks::csv::format_double(amount),
        creditworks::csv::format_double(amount),
        " " + std::to_string(term) + " months",
        creditworks::csv::format_double(std::round(int_rate * 100.0) / 100.0),
        std::string(1, grade_letter),
        std::string(1, grade_letter) + std::to_string(sub),
        i % 5 == 0 ? "" : "Engineer, Senior",
        std::to_string(rng.below(11)) + " years",
        blank_home ? "" : homes[rng.below(3)],
        creditworks::csv::format_double(std::round(annual_inc)),
        blank_dti ? "" : creditworks::csv::format_double(std::round(dti * 100.0) / 100.0),
        std::to_string(open_acc),
        std::to_string(total_acc),
        std::to_string(660 + 5 * static_cast<int>(rng.below(30))),
        "Dec-2015",
        purpose,
        "Loan \"for\" things",
        status,
        creditworks::csv::format_double(std::round(recoveries * 100.0) / 100.0),
        creditworks::csv::format_double(std::round(received * 100.0) / 100.0),
    };
    creditworks::csv::write_row(out, row);
  }
  return out.str();
}

std::filesystem::path shipped_column_spec() {
  return std::filesystem::path(CREDITWORKS_SOURCE_DIR) / "data" /
         "lending_club_columns.json";
}

}  // namespace fixtures
