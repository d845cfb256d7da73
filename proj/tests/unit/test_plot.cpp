#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "holobeam/error.hpp"
#include "holobeam/plot.hpp"

using namespace holobeam;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const std::filesystem::path kData = HOLOBEAM_TEST_DATA;

std::size_t count(const std::string& s, const std::string& needle) {
  std::size_t n = 0;
  for (auto p = s.find(needle); p != std::string::npos; p = s.find(needle, p + 1)) ++n;
  return n;
}

}  // namespace

TEST(Plot, EmptyResultHasAxes) {
  const std::string svg = render_svg({}, {});
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
  EXPECT_EQ(count(svg, "<polyline"), 0u);
  EXPECT_EQ(count(svg, "<line"), 2u);
}

TEST(Plot, OnePolylinePerSeries) {
  const ExperimentResult r = read_results(kData / "golden_small.csv");
  const std::string svg = render_svg(r, {});
  EXPECT_EQ(count(svg, "<polyline"), 6u);
  EXPECT_EQ(svg, render_svg(r, {}));
  PlotOptions lin;
  lin.log_y = false;
  lin.metric = PlotMetric::mean_rate;
  lin.title = "rate <n>";
  const std::string rate = render_svg(r, lin);
  EXPECT_NE(rate, svg);
  EXPECT_NE(rate.find("rate &lt;n&gt;"), std::string::npos);
}

TEST(Plot, GoldenSnapshot) {
  const auto out = std::filesystem::temp_directory_path() / "holobeam_golden.svg";
  PlotOptions opt;
  opt.title = "error probability";
  opt.log_y = true;
  emit_svg(kData / "golden_small.csv", out, opt);
  EXPECT_EQ(slurp(out), slurp(kData / "golden_small.svg"));
  std::filesystem::remove(out);
}

TEST(Plot, MalformedCsvIsParseError) {
  const auto bad = std::filesystem::temp_directory_path() / "holobeam_bad.csv";
  {
    std::ofstream(bad) << "not,a,results,file\n";
  }
  try {
    emit_svg(bad, bad.string() + ".svg", {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::parse_error);
  }
  std::filesystem::remove(bad);
}
