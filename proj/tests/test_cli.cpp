#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "sedwalk/cli.hpp"

using sedwalk::cli::run;
using Json = nlohmann::json;

namespace {

struct Result {
  int status;
  std::string out;
  std::string err;
};

Result call(std::vector<std::string> args) {
  std::ostringstream out, err;
  int status = run(args, out, err);
  return {status, out.str(), err.str()};
}

}  // namespace

TEST(Cli, ClassifyCocktailPartyLaplacian) {
  auto r = call({"classify", "--graph", "KM(2,2,2)", "--matrix", "L", "--vertex", "0"});
  ASSERT_EQ(r.status, 0) << r.err;
  auto j = Json::parse(r.out);
  EXPECT_EQ(j["schema"], 1);
  EXPECT_EQ(j["verdict"], "Sedentary");
  EXPECT_NEAR(j["constant"].get<double>(), 1.0 / 3, 1e-9);
  EXPECT_TRUE(j["tight"].get<bool>());
  EXPECT_EQ(j["matrix_kind"], "L");
  EXPECT_EQ(j["time"]["pi_multiple"], "pi/2");
}

TEST(Cli, ClassifyCompleteMinusEdgeHasTransfer) {
  auto r = call({"classify", "--graph", "join(O(2),K(6))", "--matrix", "L", "--vertex", "0"});
  ASSERT_EQ(r.status, 0) << r.err;
  auto j = Json::parse(r.out);
  EXPECT_EQ(j["verdict"], "PST");
  EXPECT_EQ(j["partner"], 1);
  EXPECT_EQ(j["time"]["pi_multiple"], "pi/2");
}

TEST(Cli, SeriesCsvForProductOfCompleteGraphs) {
  auto r = call({"series", "--graph", "dprod(K(3),K(4))", "--matrix", "A", "--vertex", "0", "--tmax", "6.2832", "--steps",
                 "10000"});
  ASSERT_EQ(r.status, 0) << r.err;
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "t,magnitude");
  std::size_t rows = 0;
  double lo = 1.0;
  while (std::getline(in, line)) {
    ++rows;
    lo = std::min(lo, std::stod(line.substr(line.find(',') + 1)));
  }
  EXPECT_EQ(rows, 10000u);
  EXPECT_NEAR(lo, 0.142, 5e-4);
}

TEST(Cli, AllVerticesProducesArray) {
  auto r = call({"classify", "--graph", "S(3)", "--all-vertices"});
  ASSERT_EQ(r.status, 0) << r.err;
  auto j = Json::parse(r.out);
  ASSERT_TRUE(j.is_array());
  EXPECT_EQ(j.size(), 4u);
  EXPECT_EQ(j[0]["verdict"], "NotSedentary");
}

TEST(Cli, TableAndCsvFormats) {
  auto t = call({"classify", "--graph", "K(3)", "--all-vertices", "--format", "table"});
  EXPECT_EQ(t.status, 0);
  EXPECT_NE(t.out.find("Sedentary"), std::string::npos);
  auto c = call({"classify", "--graph", "K(3)", "--vertex", "0", "--format", "csv"});
  EXPECT_EQ(c.status, 0);
  EXPECT_EQ(c.out.find("vertex,"), 0u);
}

TEST(Cli, AnalyzeTwinsSpectrum) {
  auto a = call({"analyze", "--graph", "join(K(2),C(4))", "--matrix", "L"});
  ASSERT_EQ(a.status, 0) << a.err;
  auto j = Json::parse(a.out);
  EXPECT_EQ(j["order"], 6);
  EXPECT_EQ(j["vertices"].size(), 6u);
  EXPECT_FALSE(j["twin_sets"].empty());

  auto tw = call({"twins", "--graph", "KM(3,4)"});
  ASSERT_EQ(tw.status, 0);
  EXPECT_EQ(Json::parse(tw.out)["twin_sets"].size(), 2u);

  auto sp = call({"spectrum", "--graph", "C(4)", "--vertex", "0"});
  ASSERT_EQ(sp.status, 0);
  auto s = Json::parse(sp.out);
  EXPECT_EQ(s["eigenvalues"].size(), 3u);
  EXPECT_EQ(s["supports"][0]["support"].size(), 3u);
}

TEST(Cli, GeneralizedAdjacencyMatrix) {
  auto r = call({"classify", "--graph", "C(5)", "--matrix", "Mq:0.5", "--vertex", "0"});
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(Json::parse(r.out)["matrix_kind"].get<std::string>().rfind("Mq:", 0), 0u);
}

TEST(Cli, FamiliesSweep) {
  auto r = call({"families", "--family", "complete-product", "--nmin", "3", "--nmax", "5", "--format", "csv"});
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(r.out.rfind("family,params,vertex_class,verdict,constant,time\n", 0), 0u);
  EXPECT_NE(r.out.find("Sedentary"), std::string::npos);
  for (const char* fam : {"multipartite", "cocktail", "kne", "threshold"}) {
    auto f = call({"families", "--family", fam, "--matrix", "L", "--nmax", "6"});
    EXPECT_EQ(f.status, 0) << fam << ": " << f.err;
    EXPECT_NO_THROW(Json::parse(f.out)) << fam;
  }
}

TEST(Cli, EdgeListFileAndOutFile) {
  const auto dir = std::filesystem::temp_directory_path();
  const auto in = (dir / "sedwalk_cli_test_graph.txt").string();
  const auto outp = (dir / "sedwalk_cli_test_out.json").string();
  {
    std::ofstream f(in);
    f << "n 3\n0 1\n1 2\n0 2\n";
  }
  auto r = call({"classify", "--file", in, "--vertex", "0", "--out", outp});
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  std::ifstream f(outp);
  std::stringstream buf;
  buf << f.rdbuf();
  EXPECT_EQ(Json::parse(buf.str())["verdict"], "Sedentary");
  std::remove(in.c_str());
  std::remove(outp.c_str());
}

TEST(Cli, DeterministicOutput) {
  std::vector<std::string> args{"analyze", "--graph", "Gamma(2,3,1,4)", "--matrix", "L"};
  auto a = call(args), b = call(args);
  EXPECT_EQ(a.status, 0);
  EXPECT_EQ(a.out, b.out);
  auto s1 = call({"families", "--family", "threshold", "--nmax", "7"});
  auto s2 = call({"families", "--family", "threshold", "--nmax", "7"});
  EXPECT_EQ(s1.out, s2.out);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(call({"classify", "--graph", "K(3", "--vertex", "0"}).status, 2);
  EXPECT_EQ(call({"classify", "--graph", "K(3)", "--file", "x.txt", "--vertex", "0"}).status, 2);
  EXPECT_EQ(call({"classify", "--vertex", "0"}).status, 2);
  EXPECT_EQ(call({"classify", "--graph", "K(3)", "--matrix", "B", "--vertex", "0"}).status, 2);
  EXPECT_EQ(call({"classify", "--graph", "K(3)", "--matrix", "Mq:nan", "--vertex", "0"}).status, 2);
  EXPECT_EQ(call({"classify", "--graph", "K(3)", "--vertex", "7"}).status, 2);
  EXPECT_EQ(call({"series", "--graph", "K(3)", "--vertex", "0", "--steps", "1"}).status, 2);
  EXPECT_EQ(call({"bogus"}).status, 2);
  EXPECT_EQ(call({}).status, 2);
  EXPECT_EQ(call({"--help"}).status, 0);
  auto open = call({"classify", "--graph", "dprod(S(3),K(3))", "--matrix", "L", "--vertex", "0"});
  EXPECT_EQ(open.status, 3);
  EXPECT_NE(open.err.find("open question"), std::string::npos);
  EXPECT_EQ(call({"classify", "--graph", "dprod(S(3),K(3))", "--matrix", "A", "--vertex", "0"}).status, 0);
}
