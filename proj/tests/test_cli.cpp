#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "depthtwo/cli.hpp"

using namespace depthtwo;
using Q = Rational;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code = 0;
  std::string out;
  std::string err;
  Json json() const { return Json::parse(out); }
};

Outcome run_cli(const std::vector<std::string>& args, const std::string& stdin_text = {}) {
  std::istringstream in(stdin_text);
  std::ostringstream out, err;
  Outcome o;
  o.code = cli::run(args, in, out, err);
  o.out = out.str();
  o.err = err.str();
  return o;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("depthtwo_cli_" + std::to_string(::getpid()) + "_" +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
    unsetenv(cli::kFieldEnv);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) {
    const auto p = (dir_ / name).string();
    std::ofstream(p) << text;
    return p;
  }
  std::string write(const std::string& name, const Json& j) { return write(name, j.dump(2)); }

  std::string built(const std::string& name, const std::vector<std::string>& args) {
    auto o = run_cli(args);
    EXPECT_EQ(o.code, 0) << o.err;
    return write(name, o.out);
  }

  fs::path dir_;
};

}  // namespace

TEST_F(CliTest, TriangularOverDiagonalIsNotD2) {
  auto ext = run_cli({"build", "matrix-family", "--n", "2"});
  ASSERT_EQ(ext.code, 0) << ext.err;
  auto o = run_cli({"analyze", "--d2", "--side", "both", "--out", "json", "-"}, ext.out);
  ASSERT_EQ(o.code, 0) << o.err;
  auto j = o.json();
  for (const char* side : {"left", "right"}) {
    EXPECT_FALSE(j["analyses"]["d2"][side]["verdict"].get<bool>());
    EXPECT_GT(j["analyses"]["d2"][side]["witness"]["codimension"].get<int>(), 0);
  }
}

TEST_F(CliTest, TriangularExampleIsHSeparableNotSplit) {
  auto ext = run_cli({"build", "example-3-2"});
  auto j = run_cli({"analyze", "--hsep", "--split", "--out", "json", "-"}, ext.out).json();
  EXPECT_TRUE(j["analyses"]["hsep"]["verdict"].get<bool>());
  EXPECT_FALSE(j["analyses"]["split"]["verdict"].get<bool>());
  EXPECT_FALSE(j["analyses"]["split"]["witness"].is_null());
  EXPECT_EQ(j["dimensions"]["tensor_square"].get<int>(), 27);
}

TEST_F(CliTest, IdentityExtensionHasOneTermQuasibase) {
  auto path = built("id.json", {"build", "identity", "--n", "2"});
  auto j = run_cli({"analyze", "--d2", "--out", "json", path}).json();
  EXPECT_TRUE(j["analyses"]["d2"]["left"]["verdict"].get<bool>());
  EXPECT_EQ(j["analyses"]["d2"]["left"]["N"].get<int>(), 1);
  EXPECT_EQ(j["analyses"]["d2"]["right"]["N"].get<int>(), 1);
}

TEST_F(CliTest, TextOutputCarriesTimingJsonDoesNot) {
  auto path = built("m2d.json", {"build", "matrix-family", "--n", "2", "--member", "full-over-diagonal"});
  auto text = run_cli({"analyze", "--d2", path});
  EXPECT_NE(text.out.find(" ms]"), std::string::npos);
  auto json = run_cli({"analyze", "--d2", "--out", "json", path});
  EXPECT_EQ(json.out.find(" ms"), std::string::npos);
  EXPECT_EQ(json.out.find("time"), std::string::npos);
}

TEST_F(CliTest, JsonReportsAreByteIdentical) {
  auto path = built("m2d.json", {"build", "matrix-family", "--n", "2", "--member", "full-over-diagonal"});
  const std::vector<std::string> args = {"analyze", "--d2",     "--hsep", "--sep",        "--split",  "--normal",
                                         "--balanced", "--galois", "--hochschild", "--cod2", "--bialgebroid",
                                         "--bridge",   "--out",    "json",   path};
  auto a = run_cli(args), b = run_cli(args);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
}

TEST_F(CliTest, CertificatesRoundTrip) {
  auto path = built("m2d.json", {"build", "matrix-family", "--n", "2", "--member", "full-over-diagonal"});
  auto j = run_cli({"analyze", "--d2", "--hsep", "--sep", "--cod2", "--out", "json", path}).json();
  std::vector<Json> certs = {j["analyses"]["d2"]["left"]["certificate"], j["analyses"]["d2"]["right"]["certificate"],
                             j["analyses"]["hsep"]["certificate"], j["analyses"]["sep"]["certificate"],
                             j["analyses"]["cod2"]["certificate"]};
  for (std::size_t i = 0; i < certs.size(); ++i) {
    auto c = write("cert" + std::to_string(i) + ".json", certs[i]);
    auto o = run_cli({"verify", c, path});
    EXPECT_EQ(o.code, 0) << certs[i]["kind"] << ": " << o.err;
  }
}

TEST_F(CliTest, SplitCertificateRoundTrips) {
  auto path = built("m2m2.json", {"build", "identity", "--n", "2"});
  auto j = run_cli({"analyze", "--split", "--out", "json", path}).json();
  ASSERT_TRUE(j["analyses"]["split"]["verdict"].get<bool>());
  auto c = write("split.json", j["analyses"]["split"]["certificate"]);
  EXPECT_EQ(run_cli({"verify", c, path}).code, 0);
}

TEST_F(CliTest, TamperedCertificatesAreInvalid) {
  auto path = built("m2d.json", {"build", "matrix-family", "--n", "2", "--member", "full-over-diagonal"});
  auto j = run_cli({"analyze", "--d2", "--hsep", "--cod2", "--side", "left", "--out", "json", path}).json();
  auto q = j["analyses"]["d2"]["left"]["certificate"];
  q["t"][0][0] = "5/3";
  EXPECT_EQ(run_cli({"verify", write("q.json", q), path}).code, 1);
  auto h = j["analyses"]["hsep"]["certificate"];
  h["r"][0][0] = "2";
  EXPECT_EQ(run_cli({"verify", write("h.json", h), path}).code, 1);
  auto c = j["analyses"]["cod2"]["certificate"];
  c["alpha"][0][0][0] = "9";
  EXPECT_EQ(run_cli({"verify", write("c.json", c), path}).code, 1);
  auto bad = q;
  bad["kind"] = "mystery";
  EXPECT_EQ(run_cli({"verify", write("b.json", bad), path}).code, 2);
  bad = q;
  bad["N"] = 99;
  EXPECT_EQ(run_cli({"verify", write("n.json", bad), path}).code, 2);
}

TEST_F(CliTest, InputErrors) {
  auto path = built("m2d.json", {"build", "matrix-family", "--n", "2", "--member", "full-over-diagonal"});
  EXPECT_EQ(run_cli({"analyze", "--d2", "-"}, "{\"dim\": 2").code, 2);
  EXPECT_EQ(run_cli({"analyze", path}).code, 2);
  EXPECT_EQ(run_cli({"analyze", "--run", "depth-three", path}).code, 2);
  EXPECT_EQ(run_cli({"analyze", "--frobenius", path}).code, 2);
  EXPECT_EQ(run_cli({"analyze", "--d2", (dir_ / "missing.json").string()}).code, 2);
  EXPECT_EQ(run_cli({"analyze", "--group-galois", path}).code, 2);
  EXPECT_EQ(run_cli({"build", "no-such-builder"}).code, 2);
  EXPECT_EQ(run_cli({"build", "exterior", "--field", "fp:2"}).code, 2);
  EXPECT_EQ(run_cli({"analyze", "--d2", "--field", "fp:4", path}).code, 2);
  auto broken = Json::parse(std::ifstream(path));
  broken["total"]["structure_constants"][0][0][0] = "3";
  EXPECT_EQ(run_cli({"analyze", "--d2", write("broken.json", broken)}).code, 2);
}

TEST_F(CliTest, GuardAndCapErrors) {
  auto path = built("t.json", {"build", "example-3-2"});
  EXPECT_EQ(run_cli({"analyze", "--d2", "--dim-guard", "10", path}).code, 3);
  EXPECT_NE(run_cli({"analyze", "--hochschild", "--degree-cap", "0", path}).code, 0);
}

TEST_F(CliTest, FieldSelection) {
  auto path = built("m2d.json", {"build", "matrix-family", "--n", "2", "--member", "full-over-diagonal"});
  auto j = run_cli({"analyze", "--d2", "--field", "fp:7", "--out", "json", path}).json();
  EXPECT_EQ(j["target"]["field"], "fp:7");
  setenv(cli::kFieldEnv, "fp:5", 1);
  j = run_cli({"analyze", "--d2", "--out", "json", path}).json();
  EXPECT_EQ(j["target"]["field"], "fp:5");
  j = run_cli({"analyze", "--d2", "--field", "q", "--out", "json", path}).json();
  EXPECT_EQ(j["target"]["field"], "q");
  unsetenv(cli::kFieldEnv);
  // data written over F_5 is not reinterpreted over the rationals
  auto p5 = built("m2d5.json", {"build", "matrix-family", "--n", "2", "--member", "full-over-diagonal", "--field", "fp:5"});
  EXPECT_EQ(run_cli({"analyze", "--d2", "--out", "json", p5}).json()["target"]["field"], "fp:5");
  EXPECT_EQ(run_cli({"analyze", "--d2", "--field", "q", p5}).code, 2);
}

TEST_F(CliTest, GroupBuilderAndNormality) {
  auto path = built("s3a3.json", {"build", "group", "--gen", "(1 2 3)", "--gen", "(1 2)", "--sub", "(1 2 3)"});
  auto j = run_cli({"analyze", "--d2", "--normal", "--out", "json", path}).json();
  EXPECT_TRUE(j["analyses"]["d2"]["left"]["verdict"].get<bool>());
  EXPECT_EQ(j["analyses"]["normal"]["ideals"].size(), 2u);
  EXPECT_TRUE(j["analyses"]["normal"]["all_invariant"].get<bool>());
  EXPECT_EQ(run_cli({"build", "group", "--gen", "(1 2)", "--sub", "(1 2 3)"}).code, 2);
}

TEST_F(CliTest, ClosureBuilders) {
  auto a = built("a.json", {"build", "matrix-family", "--n", "2", "--member", "full-over-diagonal"});
  auto b = built("b.json", {"build", "identity", "--n", "2"});
  auto p = built("p.json", {"build", "product", a, b});
  auto t = built("t.json", {"build", "tensor", a, b});
  auto m = built("m.json", {"build", "matrix-of", a, "--n", "2"});
  for (const auto& f : {p, t, m}) {
    auto j = run_cli({"analyze", "--d2", "--side", "left", "--out", "json", f}).json();
    EXPECT_TRUE(j["analyses"]["d2"]["left"]["verdict"].get<bool>()) << f;
  }
  EXPECT_EQ(run_cli({"build", "product", a}).code, 2);
}

TEST_F(CliTest, CoalgebraMapInput) {
  auto h = built("h.json", {"build", "grouplike-counit", "--n", "2"});
  auto j = run_cli({"analyze", "--cod2", "--bialgebroid", "--bridge", "--out", "json", h}).json();
  EXPECT_EQ(j["target"]["kind"], "coalgebra-map");
  EXPECT_TRUE(j["analyses"]["cod2"]["verdict"].get<bool>());
  for (const auto& [name, v] : j["analyses"]["bialgebroid"]["axioms"].items()) EXPECT_TRUE(v.get<bool>()) << name;
  EXPECT_TRUE(j["analyses"]["bridge"]["bijective"].get<bool>());
  auto c = write("c.json", j["analyses"]["cod2"]["certificate"]);
  EXPECT_EQ(run_cli({"verify", c, h}).code, 0);
}

TEST(JsonIo, RoundTrips) {
  const auto ext = build_matrix_family<Q>(3).full_over_triangular;
  const auto back = parse_extension<Q>(Json::parse(extension_json(ext).dump()));
  EXPECT_EQ(*back.base, *ext.base);
  EXPECT_EQ(*back.total, *ext.total);
  EXPECT_EQ(back.map, ext.map);
  const auto hom = dualize_extension(ext);
  const auto hb = parse_hom<Q>(Json::parse(hom_json(hom).dump()));
  EXPECT_EQ(hb.g, hom.g);
  EXPECT_EQ(hb.source->delta, hom.source->delta);
  EXPECT_EQ(hb.target->counit, hom.target->counit);
  EXPECT_EQ(parse_scalar<Q>(Json("-7/21")), Q::parse("-1/3"));
  EXPECT_EQ(parse_scalar<Q>(Json(4)), Q(4));
  EXPECT_THROW(parse_scalar<Q>(Json(0.5)), ParseError);
  EXPECT_THROW(parse_field("fp:9"), ParseError);
}

TEST(JsonIo, MapMatrixRowsAreImages) {
  const auto ext = build_matrix_family<Q>(2).triangular_over_diagonal;
  const auto j = extension_json(ext);
  // Diag2 -> T2: e22 (base index 1) goes to the basis element at total index 2
  EXPECT_EQ(j["map_matrix"][1][2], "1");
  EXPECT_EQ(j["map_matrix"].size(), 2u);
}
