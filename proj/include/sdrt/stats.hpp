#pragma once

#include <string>
#include <vector>

#include "sdrt/transcript.hpp"

namespace sdrt {

// 2x2 counts; rows are groups, columns outcome present/absent.
struct ContingencyTable2x2 {
  long a = 0, b = 0;
  long c = 0, d = 0;

  long total() const { return a + b + c + d; }
};

enum class TestKind { Chi2, Chi2Yates, Binomial };

struct TestResult {
  double statistic = 0.0;
  double p_value = 1.0;
  TestKind test = TestKind::Chi2;
  int df = 1;
};

// Pearson chi-square on a 2x2 table, df=1. With `corrected`, applies the
// Yates continuity correction (|O-E| reduced by 0.5, floored at 0). Throws
// DomainError on a zero margin.
TestResult chi2_2x2(const ContingencyTable2x2& t, bool corrected = false);

// Upper tail of the chi-square distribution at df=1.
double chi2_pvalue_df1(double statistic);

// Upper-tail exact binomial: P(X >= k) for X ~ Bin(n, p0), n <= 64.
TestResult binomial_onetailed(long k, long n, double p0);

struct LabelledTest {
  std::string label;
  TestResult result;
};

struct PopulationCounts {
  long none = 0;
  long non_decisive = 0;
  long decisive = 0;
  long discontinuous() const { return non_decisive + decisive; }
  long total() const { return none + non_decisive + decisive; }
};

// Discontinuity-by-population breakdown with the four pairwise chi-square
// columns (SCH vs HC, SCH-P vs HC, SCH-D vs HC, SCH-P vs SCH-D), run on the
// discontinuous/none margins and again on the non-decisive margins with
// decisive sequences excluded, plus the one-tailed binomial tests on the
// decisive sequences.
struct Table2Result {
  PopulationCounts sch_p, sch_d, hc;
  std::vector<LabelledTest> discontinuity_tests;
  std::vector<LabelledTest> non_decisive_tests;
  std::vector<LabelledTest> binomial_tests;

  std::string render_text() const;
  std::string to_json() const;
};

struct Table3Stratum {
  Medication medication = Medication::S;
  long p_non_decisive = 0, p_none = 0;
  long d_non_decisive = 0, d_none = 0;
  TestResult crossing;  // non-decisive vs none, SCH-P against SCH-D
};

struct Table3Result {
  std::vector<Table3Stratum> strata;  // S then A, present strata only
  std::vector<std::string> warnings;

  std::string render_text() const;
  std::string to_json() const;
};

Table2Result table2(const std::vector<SequenceRecord>& records);
Table3Result table3(const std::vector<SequenceRecord>& records);

std::string format_p(double p);

}  // namespace sdrt
