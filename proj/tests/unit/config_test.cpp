#include <gtest/gtest.h>

#include "bcplus/config.hpp"
#include "bcplus/error.hpp"

using namespace bcplus;

namespace {

ErrorCode code_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::ValidationFailed;
}

}  // namespace

TEST(Config, ReadsKnownKeys) {
  auto c = parse_config(
      "[solver]\nmax_horizon = 12\nmax_conflicts = 500\n"
      "[pipeline]\nsat_budget = 4\nhuman_hook = yes\n"
      "[client]\nmodel = m1\napi_key_env = MY_KEY\n"
      "[bench]\nworkers = 2\n");
  EXPECT_EQ(c.solve.max_horizon, 12);
  EXPECT_EQ(c.solve.limits.max_conflicts, 500u);
  EXPECT_EQ(c.pipeline.sat_budget, 4);
  EXPECT_EQ(c.pipeline.feedback_budget, 3);
  EXPECT_TRUE(c.pipeline.human_hook);
  EXPECT_EQ(c.client.model, "m1");
  EXPECT_EQ(c.client.api_key_env, "MY_KEY");
  EXPECT_EQ(c.bench.workers, 2);
}

TEST(Config, EmptyTextKeepsDefaults) {
  auto c = parse_config("");
  EXPECT_EQ(c.pipeline.sat_budget, 10);
  EXPECT_EQ(c.pipeline.sample_cap, 5);
  EXPECT_EQ(c.oracle.state_cap, 5000000u);
}

TEST(Config, RejectsUnknownOrBadEntries) {
  EXPECT_EQ(code_of("[solver]\nmax_horizn = 3\n"), ErrorCode::Config);
  EXPECT_EQ(code_of("[solvers]\nx = 1\n"), ErrorCode::Config);
  EXPECT_EQ(code_of("[solver]\nmax_horizon = many\n"), ErrorCode::Config);
  EXPECT_EQ(code_of("[pipeline]\nhuman_hook = maybe\n"), ErrorCode::Config);
  EXPECT_EQ(code_of("[pipeline]\nsat_budget = -1\n"), ErrorCode::Config);
  EXPECT_EQ(code_of("[bench]\nworkers = 0\n"), ErrorCode::Config);
  EXPECT_EQ(code_of("[solver\n"), ErrorCode::Config);
}

TEST(Config, RenderRoundTrip) {
  Config c;
  c.solve.max_horizon = 40;
  c.pipeline.human_file = "/tmp/edit.bc";
  c.client.temperature = 0.5;
  auto text = render_config(c);
  auto back = parse_config(text);
  EXPECT_EQ(render_config(back), text);
  EXPECT_EQ(back.solve.max_horizon, 40);
  EXPECT_EQ(back.pipeline.human_file, "/tmp/edit.bc");
}

TEST(Config, MissingFileIsIoError) {
  try {
    load_config("/nonexistent/bcplus.ini");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Io);
  }
}

TEST(Config, ShippedFileMatchesDefaults) {
  auto c = load_config("config/bcplus.ini");
  Config d;
  c.pipeline.templates = d.pipeline.templates;
  c.bench.suite_file = d.bench.suite_file;
  EXPECT_EQ(render_config(c), render_config(d));
}
