#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "gtest/gtest.h"

#include "bregsolve/config.hpp"
#include "bregsolve/trace_io.hpp"

namespace bregsolve {
namespace {

struct CliResult {
  int exit_code = -1;
  std::string output;
};

CliResult run_cli(const std::string& args) {
  const std::string cmd = std::string(BREGSOLVE_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  EXPECT_NE(pipe, nullptr);
  CliResult res;
  char buf[512];
  while (fgets(buf, sizeof(buf), pipe)) res.output += buf;
  const int rc = pclose(pipe);
  res.exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  return res;
}

std::string write_temp(const std::string& name, const std::string& content) {
  const std::string path = testing::TempDir() + name;
  std::ofstream os(path, std::ios::binary);
  os << content;
  return path;
}

bool same_double(double a, double b) { return a == b || (std::isnan(a) && std::isnan(b)); }

TEST(Config, PresetTextsLoadAndEcho) {
  for (const std::string name : {"paper-example", "projection-only", "multi-omega"}) {
    const auto lr = load_run_config(name);
    EXPECT_EQ(lr.echo, preset_config_text(name));
    EXPECT_EQ(lr.problem.spec.dim, 1);
  }
  const auto pe = load_run_config(std::string("paper-example"));
  EXPECT_EQ(pe.run.wiring, Wiring::Resolvent);
  EXPECT_DOUBLE_EQ(pe.run.x1[0], 5.0);
  EXPECT_DOUBLE_EQ(pe.run.anchor_u[0], 1.0);
  EXPECT_DOUBLE_EQ(pe.problem.c1, 9.0);
  const auto po = load_run_config(std::string("projection-only"));
  EXPECT_EQ(po.run.wiring, Wiring::DirectProjection);
  const auto mo = load_run_config(std::string("multi-omega"));
  EXPECT_DOUBLE_EQ(mo.run.anchor_u[0], 0.7);
  EXPECT_EQ(mo.schedule_name, "halpern-sqrt");
}

TEST(Config, FileEchoIsByteForByte) {
  const std::string text = preset_config_text("paper-example") + "\n# trailing comment\n";
  const std::string path = write_temp("echo_test.cfg", text);
  const auto lr = load_run_config(path);
  EXPECT_EQ(lr.echo, text);
}

TEST(Config, SectionPresetWithOverrides) {
  const std::string text =
      "[problem]\n"
      "preset = paper-example\n"
      "c1 = 10\n"
      "[schedule]\n"
      "preset = paper-example\n"
      "lambda = 0.05\n"
      "[run]\n"
      "x1 = 1\n"
      "anchor_u = 0.25\n";
  const auto lr = load_run_config_text(text);
  EXPECT_DOUBLE_EQ(lr.problem.c1, 10.0);
  EXPECT_DOUBLE_EQ(lr.problem.c2, 9.0);
  EXPECT_DOUBLE_EQ(lr.schedule.lambda(1), 0.05);
  EXPECT_DOUBLE_EQ(lr.run.x1[0], 1.0);
}

TEST(Config, ParseErrors) {
  EXPECT_THROW(load_run_config_text("[problem]\nbogus_key = 1\n"), ParseError);
  EXPECT_THROW(load_run_config_text("[weird]\nx = 1\n"), ParseError);
  EXPECT_THROW(load_run_config_text("key_outside = 1\n"), ParseError);
  EXPECT_THROW(load_run_config_text("[problem]\npreset = nope\n"), ParseError);
  EXPECT_THROW(load_run_config_text(preset_config_text("paper-example") + "[run]\nx1 = oops\n"),
               ParseError);
  EXPECT_THROW(load_run_config(std::string("/nonexistent/path.cfg")), ParseError);
}

TEST(TraceCsv, HeaderShape) {
  EXPECT_EQ(trace_csv_header(1), "n,x_0,y_0,z_0,residual,df_target,lemma_arg_slack");
  EXPECT_EQ(trace_csv_header(2), "n,x_0,x_1,y_0,y_1,z_0,z_1,residual,df_target,lemma_arg_slack");
}

TEST(TraceCsv, LosslessRoundTrip) {
  auto lr = load_run_config(std::string("paper-example"));
  lr.run.max_iters = 7;
  const auto res = run(lr.problem, lr.schedule, lr.run);
  ASSERT_EQ(res.trace.size(), 7u);

  std::stringstream ss;
  write_trace_csv(ss, res.trace, lr.problem.spec.dim);
  const auto parsed = read_trace_csv(ss);
  ASSERT_EQ(parsed.size(), res.trace.size());
  for (std::size_t i = 0; i < parsed.size(); ++i) {
    EXPECT_EQ(parsed[i].n, res.trace[i].n);
    EXPECT_TRUE(same_double(parsed[i].x[0], res.trace[i].x[0]));
    EXPECT_TRUE(same_double(parsed[i].y[0], res.trace[i].y[0]));
    EXPECT_TRUE(same_double(parsed[i].z[0], res.trace[i].z[0]));
    EXPECT_TRUE(same_double(parsed[i].residual, res.trace[i].residual));
    EXPECT_TRUE(same_double(parsed[i].df_target, res.trace[i].df_target));
    EXPECT_TRUE(same_double(parsed[i].lemma_arg_slack, res.trace[i].lemma_arg_slack));
  }
}

TEST(TraceCsv, NanColumnsRoundTripWithoutTarget) {
  auto lr = load_run_config(std::string("paper-example"));
  lr.run.max_iters = 3;
  lr.run.track_target.reset();
  const auto res = run(lr.problem, lr.schedule, lr.run);
  std::stringstream ss;
  write_trace_csv(ss, res.trace, 1);
  const auto parsed = read_trace_csv(ss);
  ASSERT_EQ(parsed.size(), 3u);
  EXPECT_TRUE(std::isnan(parsed[0].df_target));
  EXPECT_TRUE(std::isnan(parsed[0].lemma_arg_slack));
}

TEST(Cli, ValidateExitCodes) {
  EXPECT_EQ(run_cli("validate paper-example").exit_code, 0);

  const std::string literal =
      preset_config_text("paper-example") + "[schedule]\npreset = paper-literal\n";
  const std::string path = write_temp("literal.cfg", literal);
  const auto res = run_cli("validate " + path);
  EXPECT_EQ(res.exit_code, 1);
  EXPECT_NE(res.output.find("alpha2"), std::string::npos) << res.output;
  EXPECT_NE(res.output.find("n=1"), std::string::npos) << res.output;

  const std::string bad = write_temp("bad.cfg", "[problem]\nnot_a_key = 3\n");
  EXPECT_EQ(run_cli("validate " + bad).exit_code, 2);
  EXPECT_EQ(run_cli("validate /no/such/file.cfg").exit_code, 2);
}

TEST(Cli, RunPaperPresetWritesTraceAndReportsCap) {
  const std::string trace_path = testing::TempDir() + "paper_trace.csv";
  const auto res = run_cli("run paper-example --max-iters 10 --trace-out " + trace_path);
  EXPECT_EQ(res.exit_code, 3) << res.output;  // iteration cap

  std::ifstream in(trace_path);
  ASSERT_TRUE(in.good());
  const auto rows = read_trace_csv(in);
  ASSERT_EQ(rows.size(), 10u);
  EXPECT_EQ(rows[0].n, 1);
  // first-step prox value: (23/64) * 5
  EXPECT_DOUBLE_EQ(rows[0].y[0], 1.796875);
  EXPECT_DOUBLE_EQ(rows[0].x[0], 5.0);
}

TEST(Cli, RunTrivialPresetConvergesWithSingleRow) {
  const std::string cfg = write_temp("trivial.cfg",
                                     "[problem]\n"
                                     "preset = paper-example\n"
                                     "[schedule]\n"
                                     "preset = paper-example\n"
                                     "[run]\n"
                                     "x1 = 0\n"
                                     "anchor_u = 0\n"
                                     "track_target = 0\n");
  const std::string trace_path = testing::TempDir() + "trivial_trace.csv";
  const auto res = run_cli("run " + cfg + " --trace-out " + trace_path);
  EXPECT_EQ(res.exit_code, 0) << res.output;
  std::ifstream in(trace_path);
  const auto rows = read_trace_csv(in);
  EXPECT_EQ(rows.size(), 1u);
}

TEST(Cli, AnchorFlagOverridesTheAnchor) {
  // with both start and anchor at 0, the run converges on the first step
  const std::string cfg = write_temp("anchor_flag.cfg",
                                     "[problem]\n"
                                     "preset = paper-example\n"
                                     "[schedule]\n"
                                     "preset = paper-example\n"
                                     "[run]\n"
                                     "x1 = 0\n"
                                     "anchor_u = 1\n");
  const std::string trace_path = testing::TempDir() + "anchor_flag.csv";
  const auto res = run_cli("run " + cfg + " --anchor 0 --trace-out " + trace_path);
  EXPECT_EQ(res.exit_code, 0) << res.output;
  std::ifstream in(trace_path);
  EXPECT_EQ(read_trace_csv(in).size(), 1u);
}

TEST(Cli, RunMultiOmegaConverges) {
  const std::string trace_path = testing::TempDir() + "momega_trace.csv";
  const auto res = run_cli("run multi-omega --trace-out " + trace_path);
  EXPECT_EQ(res.exit_code, 0) << res.output;
  EXPECT_NE(res.output.find("Converged"), std::string::npos);
}

TEST(Cli, RunRejectsInvalidSchedule) {
  const std::string literal =
      preset_config_text("paper-example") + "[schedule]\npreset = paper-literal\n";
  const std::string path = write_temp("literal_run.cfg", literal);
  EXPECT_EQ(run_cli("run " + path).exit_code, 1);
}

TEST(Cli, StageErrorExitsWithCode4) {
  // validates fine, but the anchor leaves the entropy domain at run time
  const std::string cfg = write_temp("entropy_bad_anchor.cfg",
                                     "[problem]\n"
                                     "legendre = negative-entropy\n"
                                     "dim = 1\n"
                                     "set = box\n"
                                     "box_lower = 0.1\n"
                                     "box_upper = 2\n"
                                     "g_q = 0\n"
                                     "g_r = 0\n"
                                     "g_p = 0\n"
                                     "c1 = 1\n"
                                     "c2 = 1\n"
                                     "phi = zero\n"
                                     "s_scale = 1\n"
                                     "[schedule]\n"
                                     "preset = halpern-sqrt\n"
                                     "lambda = 0.5\n"
                                     "[run]\n"
                                     "x1 = 1\n"
                                     "anchor_u = -1\n"
                                     "max_iters = 50\n");
  const auto res = run_cli("run " + cfg + " --trace-out " + testing::TempDir() + "ebad.csv");
  EXPECT_EQ(res.exit_code, 4) << res.output;
  EXPECT_NE(res.output.find("h_average"), std::string::npos) << res.output;
}

TEST(Cli, CheckProperties) {
  const auto res = run_cli("check-properties");
  EXPECT_EQ(res.exit_code, 0) << res.output;
  EXPECT_NE(res.output.find("[PASS] dual-inverse"), std::string::npos);
}

TEST(Cli, ReproduceExample) {
  const auto res = run_cli("reproduce-example");
  EXPECT_EQ(res.exit_code, 0) << res.output;
  EXPECT_NE(res.output.find("ratios reproduced"), std::string::npos);
}

}  // namespace
}  // namespace bregsolve
