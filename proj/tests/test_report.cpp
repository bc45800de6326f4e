#include <gtest/gtest.h>

#include <sstream>

#include "sygr/error.hpp"
#include "sygr/report.hpp"
#include "sygr/svg_plot.hpp"
#include "sygr/synth.hpp"

using namespace sygr;

namespace {

EstimateSummary summary(double lo, double median, double hi) {
  EstimateSummary s;
  s.ensemble = {lo, median, hi};
  s.replicate_index = {0, 1, 3};
  s.failed = 1;
  s.lo = lo;
  s.median = median;
  s.hi = hi;
  s.width = hi - lo;
  return s;
}

}  // namespace

TEST(Report, PercentLabels) {
  EXPECT_EQ(to_percent(0.705), 71);
  EXPECT_EQ(to_percent(0.7049), 70);
  EXPECT_EQ(to_percent(-0.026), -3);
  EXPECT_EQ(percentile_label(0.025), "p2.5");
  EXPECT_EQ(percentile_label(0.975), "p97.5");
  EXPECT_EQ(percentile_label(0.05), "p5");
  EXPECT_EQ(percentile_label(0.005), "p0.5");
}

TEST(Report, SummaryWidthIsRoundedFromUnroundedValues) {
  // 0.664 -> 66 and 0.756 -> 76 but the width 0.092 rounds to 9, not 10.
  const std::vector<SummaryRow> rows{{"2013", "traditional", 0.7, summary(0.664, 0.7, 0.756)},
                                     {"2013", "markov-full", 0.69, summary(0.65, 0.69, 0.73)}};
  std::ostringstream csv, full, text;
  write_summary_csv(csv, rows, 0.95);
  write_summary_full_csv(full, rows, 0.95);
  write_summary_text(text, rows, 0.95);
  EXPECT_EQ(csv.str(),
            "cohort,method,p2.5,median,p97.5,width\n"
            "2013,traditional,66,70,76,9\n"
            "2013,markov-full,65,69,73,8\n");
  EXPECT_EQ(full.str().substr(0, full.str().find('\n')),
            "cohort,method,estimate,p2.5,median,p97.5,width,replicates,failed");
  EXPECT_NE(full.str().find("2013,traditional,0.7,0.664,0.7,0.756,"), std::string::npos);
  EXPECT_NE(full.str().find(",3,1\n"), std::string::npos);
  EXPECT_NE(text.str().find("95% CI width"), std::string::npos);
  // The cohort label is printed once per block.
  EXPECT_EQ(text.str().find("2013"), text.str().rfind("2013"));
}

TEST(Report, EnsembleRoundTrip) {
  const auto s = summary(0.1, 0.2, 1.0 / 3.0);
  std::ostringstream out;
  write_ensemble_csv(out, s);
  EXPECT_EQ(out.str().substr(0, 19), "replicate,estimate\n");
  EXPECT_NE(out.str().find("\n4,"), std::string::npos);
  std::istringstream in(out.str());
  EXPECT_EQ(read_ensemble_csv(in), s.ensemble);
  std::istringstream bad("x,density\n0.1,2\n");
  EXPECT_THROW(read_ensemble_csv(bad), ParseError);
  std::istringstream bad_value("replicate,estimate\n1,abc\n");
  EXPECT_THROW(read_ensemble_csv(bad_value), ParseError);
}

TEST(Report, KdeCsv) {
  std::ostringstream out;
  const std::vector<KdePoint> pts{{0.25, 1.5}, {0.5, 2.0}};
  write_kde_csv(out, pts);
  EXPECT_EQ(out.str(), "x,density\n0.25,1.5\n0.5,2\n");
}

TEST(Report, PersistenceDifferenceIsExposedMinusUnexposed) {
  const std::vector<PersistenceTable> tables{{"All", {{1, 0.87}, {2, 0.9}}, {{1, 0.9}, {3, 0.95}}}};
  std::ostringstream csv, text;
  write_persistence_csv(csv, tables);
  write_persistence_text(text, tables);
  std::istringstream lines(csv.str());
  std::string header, y1, y2, y3;
  std::getline(lines, header);
  std::getline(lines, y1);
  std::getline(lines, y2);
  std::getline(lines, y3);
  EXPECT_EQ(header, "group,transition,unexposed,exposed,difference");
  EXPECT_EQ(y1, "All,Y1->Y2,0.87,0.9," + format_double(0.9 - 0.87));
  EXPECT_EQ(y2, "All,Y2->Y3,0.9,NA,NA");
  EXPECT_EQ(y3, "All,Y3->Y4,NA,0.95,NA");
  EXPECT_NE(text.str().find("+3"), std::string::npos);
}

TEST(Report, AlignColumns) {
  EXPECT_EQ(align_columns({{"a", "bb"}, {"ccc", "d"}}), "a    bb\nccc  d\n");
}

TEST(Report, Fnv1a) {
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
}

TEST(Svg, DeclaresViewBoxAndDrawsEverySeries) {
  std::vector<PlotSeries> series(4);
  for (std::size_t i = 0; i < series.size(); ++i) {
    series[i].label = "Fall 201" + std::to_string(3 + i);
    series[i].curve = {{0.5, 1.0}, {0.6, 3.0}, {0.7, 1.0}};
  }
  series[3].label = "All <combined> & more";
  const std::string svg = render_kde_svg(series, "SYGR");
  EXPECT_EQ(svg.rfind("<?xml", 0), 0u);
  EXPECT_NE(svg.find("viewBox=\""), std::string::npos);
  std::size_t count = 0;
  for (auto pos = svg.find("<polyline"); pos != std::string::npos; pos = svg.find("<polyline", pos + 1)) ++count;
  EXPECT_EQ(count, 4u);
  EXPECT_NE(svg.find("All &lt;combined&gt; &amp; more"), std::string::npos);
  EXPECT_EQ(svg, render_kde_svg(series, "SYGR"));
}

TEST(Svg, PointMassMarker) {
  std::vector<PlotSeries> series(1);
  series[0].label = "constant";
  series[0].point_mass = 1.0;
  const std::string svg = render_kde_svg(series);
  EXPECT_NE(svg.find("class=\"point-mass\""), std::string::npos);
  EXPECT_EQ(svg.find("<polyline"), std::string::npos);
}
