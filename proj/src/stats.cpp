#include "sdrt/stats.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "nlohmann/json.hpp"
#include "sdrt/errors.hpp"

namespace sdrt {
namespace {

using ordered_json = nlohmann::ordered_json;

long double binomial_coefficient(long n, long k) {
  if (k < 0 || k > n) return 0.0L;
  if (k > n - k) k = n - k;
  long double c = 1.0L;
  for (long i = 1; i <= k; ++i) c = c * static_cast<long double>(n - k + i) / i;
  return c;
}

}  // namespace

double chi2_pvalue_df1(double statistic) {
  if (statistic <= 0.0) return 1.0;
  return std::erfc(std::sqrt(statistic / 2.0));
}

TestResult chi2_2x2(const ContingencyTable2x2& t, bool corrected) {
  if (t.a < 0 || t.b < 0 || t.c < 0 || t.d < 0)
    throw DomainError("chi2_2x2: negative cell count");
  const long n = t.total();
  if (n <= 0) throw DomainError("chi2_2x2: empty table");
  const long r1 = t.a + t.b, r2 = t.c + t.d;
  const long c1 = t.a + t.c, c2 = t.b + t.d;
  if (r1 == 0 || r2 == 0 || c1 == 0 || c2 == 0)
    throw DomainError("chi2_2x2: degenerate margin");

  const double cells[4] = {static_cast<double>(t.a), static_cast<double>(t.b),
                           static_cast<double>(t.c), static_cast<double>(t.d)};
  const double expected[4] = {
      static_cast<double>(r1) * c1 / n, static_cast<double>(r1) * c2 / n,
      static_cast<double>(r2) * c1 / n, static_cast<double>(r2) * c2 / n};
  double statistic = 0.0;
  for (int i = 0; i < 4; ++i) {
    double dev = std::abs(cells[i] - expected[i]);
    if (corrected) dev = std::max(0.0, dev - 0.5);
    statistic += dev * dev / expected[i];
  }
  return TestResult{
      .statistic = statistic,
      .p_value = chi2_pvalue_df1(statistic),
      .test = corrected ? TestKind::Chi2Yates : TestKind::Chi2,
      .df = 1,
  };
}

TestResult binomial_onetailed(long k, long n, double p0) {
  if (n < 0 || n > 64) throw DomainError("binomial_onetailed: n out of range");
  if (k < 0 || k > n) throw DomainError("binomial_onetailed: k out of range");
  if (!(p0 > 0.0 && p0 < 1.0))
    throw DomainError("binomial_onetailed: p0 must lie in (0,1)");

  const long double p = static_cast<long double>(p0);
  const long double q = 1.0L - p;
  long double tail = 0.0L;
  for (long i = k; i <= n; ++i)
    tail += binomial_coefficient(n, i) * std::pow(p, static_cast<long double>(i)) *
            std::pow(q, static_cast<long double>(n - i));
  if (tail > 1.0L) tail = 1.0L;
  return TestResult{
      .statistic = static_cast<double>(k),
      .p_value = static_cast<double>(tail),
      .test = TestKind::Binomial,
      .df = 0,
  };
}

std::string format_p(double p) {
  if (p < 0.001) return "<0.001";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", p);
  return buf;
}

namespace {

PopulationCounts count_population(const std::vector<SequenceRecord>& records,
                                  Population pop) {
  PopulationCounts c;
  for (const auto& r : records) {
    if (r.population != pop) continue;
    switch (r.discontinuity) {
      case Discontinuity::None: ++c.none; break;
      case Discontinuity::NonDecisive: ++c.non_decisive; break;
      case Discontinuity::Decisive: ++c.decisive; break;
    }
  }
  return c;
}

std::string pct(long part, long total) {
  if (total == 0) return "";
  char buf[16];
  std::snprintf(buf, sizeof buf, "(%.0f%%)", 100.0 * part / total);
  return buf;
}

ordered_json test_to_json(const LabelledTest& t) {
  ordered_json j;
  j["comparison"] = t.label;
  j["test"] = t.result.test == TestKind::Binomial
                  ? "binomial"
                  : (t.result.test == TestKind::Chi2Yates ? "chi2-yates"
                                                          : "chi2");
  j["statistic"] = t.result.statistic;
  j["p_value"] = t.result.p_value;
  j["df"] = t.result.df;
  return j;
}

}  // namespace

Table2Result table2(const std::vector<SequenceRecord>& records) {
  Table2Result t;
  t.sch_p = count_population(records, Population::SchP);
  t.sch_d = count_population(records, Population::SchD);
  t.hc = count_population(records, Population::Hc);
  if (t.sch_p.total() == 0 || t.sch_d.total() == 0 || t.hc.total() == 0)
    throw DomainError("table2: every population (SCH-P, SCH-D, HC) must be present");

  const PopulationCounts sch{.none = t.sch_p.none + t.sch_d.none,
                             .non_decisive =
                                 t.sch_p.non_decisive + t.sch_d.non_decisive,
                             .decisive = t.sch_p.decisive + t.sch_d.decisive};

  auto disc = [](const PopulationCounts& x, const PopulationCounts& y) {
    return chi2_2x2({x.discontinuous(), x.none, y.discontinuous(), y.none});
  };
  t.discontinuity_tests = {
      {"SCH vs HC", disc(sch, t.hc)},
      {"SCH-P vs HC", disc(t.sch_p, t.hc)},
      {"SCH-D vs HC", disc(t.sch_d, t.hc)},
      {"SCH-P vs SCH-D", disc(t.sch_p, t.sch_d)},
  };

  // Non-decisive comparison excludes the decisive sequences from the margin.
  auto nd = [](const PopulationCounts& x, const PopulationCounts& y) {
    return chi2_2x2({x.non_decisive, x.none, y.non_decisive, y.none});
  };
  t.non_decisive_tests = {
      {"SCH vs HC", nd(sch, t.hc)},
      {"SCH-P vs HC", nd(t.sch_p, t.hc)},
      {"SCH-D vs HC", nd(t.sch_d, t.hc)},
      {"SCH-P vs SCH-D", nd(t.sch_p, t.sch_d)},
  };

  const long total_decisive = t.sch_p.decisive + t.sch_d.decisive + t.hc.decisive;
  if (total_decisive > 0) {
    t.binomial_tests = {
        {"decisive SCH-P vs SCH-D",
         binomial_onetailed(t.sch_p.decisive, t.sch_p.decisive + t.sch_d.decisive,
                            0.5)},
        {"decisive SCH-P vs HC",
         binomial_onetailed(t.sch_p.decisive, t.sch_p.decisive + t.hc.decisive,
                            0.5)},
    };
  }
  return t;
}

Table3Result table3(const std::vector<SequenceRecord>& records) {
  Table3Result out;
  for (Medication med : {Medication::S, Medication::A}) {
    Table3Stratum s;
    s.medication = med;
    bool any = false;
    for (const auto& r : records) {
      if (r.medication != med) continue;
      if (r.discontinuity == Discontinuity::Decisive) continue;  // excluded
      if (r.population == Population::SchP) {
        any = true;
        (r.discontinuity == Discontinuity::NonDecisive ? s.p_non_decisive
                                                       : s.p_none)++;
      } else if (r.population == Population::SchD) {
        any = true;
        (r.discontinuity == Discontinuity::NonDecisive ? s.d_non_decisive
                                                       : s.d_none)++;
      }
    }
    if (!any) {
      out.warnings.push_back(std::string("stratum SCH-") +
                             std::string(to_string(med)) +
                             " has no rows; omitted");
      continue;
    }
    s.crossing = chi2_2x2(
        {s.p_non_decisive, s.p_none, s.d_non_decisive, s.d_none});
    out.strata.push_back(s);
  }
  return out;
}

std::string Table2Result::render_text() const {
  std::ostringstream o;
  auto row = [&](const char* label, long p, long d, long h) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-34s %5ld %-7s %5ld %-7s %5ld %-7s\n",
                  label, p, pct(p, sch_p.total()).c_str(), d,
                  pct(d, sch_d.total()).c_str(), h, pct(h, hc.total()).c_str());
    o << buf;
  };
  o << "Table 2 - discontinuity by population\n";
  o << "                                   SCH-P         SCH-D         HC\n";
  row("non-discontinuous", sch_p.none, sch_d.none, hc.none);
  row("with discontinuity", sch_p.discontinuous(), sch_d.discontinuous(),
      hc.discontinuous());
  row(" - non-decisive", sch_p.non_decisive, sch_d.non_decisive,
      hc.non_decisive);
  row(" - decisive", sch_p.decisive, sch_d.decisive, hc.decisive);
  row("total", sch_p.total(), sch_d.total(), hc.total());
  o << "\nchi2, discontinuity vs none:\n";
  for (const auto& t : discontinuity_tests) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "  %-18s chi2=%.3f  p=%s\n",
                  t.label.c_str(), t.result.statistic,
                  format_p(t.result.p_value).c_str());
    o << buf;
  }
  o << "chi2, non-decisive vs none (decisive excluded):\n";
  for (const auto& t : non_decisive_tests) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "  %-18s chi2=%.3f  p=%s\n",
                  t.label.c_str(), t.result.statistic,
                  format_p(t.result.p_value).c_str());
    o << buf;
  }
  if (!binomial_tests.empty()) {
    o << "binomial (one-tailed, p0=0.5) on decisive sequences:\n";
    for (const auto& t : binomial_tests) {
      char buf[160];
      std::snprintf(buf, sizeof buf, "  %-26s k=%ld p=%.5f\n", t.label.c_str(),
                    static_cast<long>(t.result.statistic), t.result.p_value);
      o << buf;
    }
  }
  return o.str();
}

std::string Table2Result::to_json() const {
  ordered_json j;
  auto pop = [](const PopulationCounts& c) {
    ordered_json p;
    p["none"] = c.none;
    p["non_decisive"] = c.non_decisive;
    p["decisive"] = c.decisive;
    p["total"] = c.total();
    return p;
  };
  j["counts"]["SCH-P"] = pop(sch_p);
  j["counts"]["SCH-D"] = pop(sch_d);
  j["counts"]["HC"] = pop(hc);
  for (const auto& t : discontinuity_tests)
    j["discontinuity_tests"].push_back(test_to_json(t));
  for (const auto& t : non_decisive_tests)
    j["non_decisive_tests"].push_back(test_to_json(t));
  for (const auto& t : binomial_tests)
    j["binomial_tests"].push_back(test_to_json(t));
  return j.dump(2) + "\n";
}

std::string Table3Result::render_text() const {
  std::ostringstream o;
  o << "Table 3 - non-decisive discontinuities by clinical form and medication\n";
  for (const auto& s : strata) {
    const char* name = s.medication == Medication::S ? "SCH-S (untreated)"
                                                     : "SCH-A (treated)";
    long pt = s.p_non_decisive + s.p_none;
    long dt = s.d_non_decisive + s.d_none;
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "%s\n  non-decisive  SCH-P %3ld %-7s SCH-D %3ld %-7s\n"
                  "  none          SCH-P %3ld %-7s SCH-D %3ld %-7s\n"
                  "  crossing chi2=%.3f  p=%s\n",
                  name, s.p_non_decisive, pct(s.p_non_decisive, pt).c_str(),
                  s.d_non_decisive, pct(s.d_non_decisive, dt).c_str(), s.p_none,
                  pct(s.p_none, pt).c_str(), s.d_none, pct(s.d_none, dt).c_str(),
                  s.crossing.statistic, format_p(s.crossing.p_value).c_str());
    o << buf;
  }
  for (const auto& w : warnings) o << "warning: " << w << "\n";
  return o.str();
}

std::string Table3Result::to_json() const {
  ordered_json j;
  j["strata"] = ordered_json::array();
  for (const auto& s : strata) {
    ordered_json n;
    n["medication"] = std::string(to_string(s.medication));
    n["SCH-P"] = {{"non_decisive", s.p_non_decisive}, {"none", s.p_none}};
    n["SCH-D"] = {{"non_decisive", s.d_non_decisive}, {"none", s.d_none}};
    n["crossing"] = test_to_json({"SCH-P vs SCH-D", s.crossing});
    j["strata"].push_back(std::move(n));
  }
  j["warnings"] = warnings;
  return j.dump(2) + "\n";
}

}  // namespace sdrt
