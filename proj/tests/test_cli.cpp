#include <catch_amalgamated.hpp>

#include <zeck/cli.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

using namespace zeck;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> csv_cells(const std::string& line) {
  std::vector<std::string> cells(1);
  bool quoted = false;
  for (char c : line) {
    if (c == '"') quoted = !quoted;
    else if (c == ',' && !quoted) cells.emplace_back();
    else cells.back() += c;
  }
  return cells;
}

}  // namespace

TEST_CASE("expand prints compact digits") {
  const auto r = run({"expand", "--block", "1,0", "--n", "243"});
  CHECK(r.code == 0);
  CHECK(r.out == "100000010010\n");

  const auto j = nlohmann::json::parse(run({"expand", "--n", "243,4", "--format", "json"}).out);
  CHECK(j["results"][0]["compact"] == "100000010010");
  CHECK(j["results"][1]["digits"] == nlohmann::json::array({1, 0, 1}));
}

TEST_CASE("prob reports the Benford probability at 12 digits") {
  const auto r = run({"prob", "--block", "1,0", "--lb", "1,0,0"});
  CHECK(r.code == 0);
  const double phi = (1 + std::sqrt(5.0)) / 2;
  const double expected = std::log(1 + 1 / (phi * phi)) / std::log(phi);
  CHECK(std::abs(std::stod(r.out) - expected) < 1e-11);
  CHECK(r.out.size() == 15);  // 0. plus 12 significant digits plus newline

  const auto line = run({"prob", "--lb", "1,0,0", "--profile", "line", "--format", "json"});
  const auto j = nlohmann::json::parse(line.out);
  CHECK(j["profile"] == "line");
  CHECK(std::abs(j["probability"].get<double>() - 1 / phi) < 1e-11);
}

TEST_CASE("synth examples") {
  CHECK(run({"synth", "--block", "1,0", "--profile", "line", "--count", "10"}).out == "1 2 3 6 11 19 33 36 64 111\n");
  CHECK(run({"synth", "--block", "9,9", "--count", "10", "--offset", "1"}).out ==
        "22 354 4823 60973 737166 8646003 99203371 219467105 3469004940 47433388230\n");
}

TEST_CASE("freq csv has the documented columns and rows match the library") {
  const auto r = run({"freq", "--seq", "power:2", "--s", "3", "--count", "500", "--format", "csv"});
  REQUIRE(r.code == 0);
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  CHECK(line == "block,count,empirical,theoretical,deviation");
  const auto rep = empirical_block_frequency(SequenceSpec::power(2), NumerationSystem({1, 0}), 3, 500);
  std::size_t rows = 0;
  long total = 0;
  while (std::getline(in, line)) {
    const auto cells = csv_cells(line);
    REQUIRE(cells.size() == 5);
    CHECK(cells[0] == rep.blocks[rows].block.to_string());
    CHECK(std::stol(cells[1]) == static_cast<long>(rep.blocks[rows].count));
    CHECK(std::abs(std::stod(cells[3]) - rep.blocks[rows].theoretical) < 1e-11);
    total += std::stol(cells[1]);
    ++rows;
  }
  CHECK(rows == rep.blocks.size());
  CHECK(total == static_cast<long>(rep.defined));
}

TEST_CASE("exit codes") {
  CHECK(run({"bogus"}).code == 2);
  CHECK(run({"expand"}).code == 2);
  CHECK(run({"expand", "--n", "5", "--format", "xml"}).code == 2);

  const auto bad_int = run({"expand", "--n", "12x"});
  CHECK(bad_int.code == 2);
  CHECK(bad_int.err.find("12x") != std::string::npos);

  const auto bad_block = run({"expand", "--block", "0,0", "--n", "5"});
  CHECK(bad_block.code == 2);
  CHECK(bad_block.err.find("0,0") != std::string::npos);

  const auto bad_real = run({"real-expand", "--beta", "phix"});
  CHECK(bad_real.code == 2);
  CHECK(bad_real.err.find("phix") != std::string::npos);

  // Valid syntax, outside the domain.
  CHECK(run({"prob", "--lb", "1,1,0"}).code != 0);
  CHECK(run({"real-expand", "--beta", "2"}).code == 1);
  CHECK(run({"expand", "--n", "0"}).code != 0);

  CHECK(run({"--help"}).code == 0);
  CHECK(run({"expand", "--n", "1"}).code == 0);
}

TEST_CASE("every subcommand has help naming its construct") {
  const std::vector<std::pair<std::string, std::string>> expected = {
      {"expand", "Zeckendorf"},       {"blocks", "leading blocks"},      {"prob", "Benford"},
      {"freq", "frequencies"},        {"synth", "continuation"},         {"equidist", "discrepancy"},
      {"oscillate", "lim sup"},       {"within", "within expansions"},   {"real-expand", "ℋ-expression"},
      {"concentrate", "concentrates"}, {"absolute", "Absolute Benford"}};
  REQUIRE(expected.size() == cli::commands().size());
  for (const auto& [cmd, word] : expected) {
    const auto r = run({cmd, "--help"});
    CHECK(r.code == 0);
    CHECK(r.out.find(word) != std::string::npos);
    CHECK(r.out.find("--block") != std::string::npos);
  }
}

TEST_CASE("output is deterministic") {
  const std::vector<std::vector<std::string>> cases = {
      {"within", "--block", "1,0", "--outer", "1,1", "--lb", "1,0,1", "--t", "20", "--samples", "3000", "--seed", "7",
       "--format", "json"},
      {"within", "--block", "1,0", "--outer", "1,1", "--lb", "1,0,1", "--t", "20", "--samples", "3000", "--seed", "7",
       "--threads", "3", "--format", "json"},
      {"freq", "--seq", "lucas", "--s", "4", "--count", "300", "--format", "json"},
      {"absolute", "--seq", "power:2", "--count", "400", "--s-max", "2", "--format", "csv"},
      {"oscillate", "--a", "2", "--lb", "1,0,0,0,1,0", "--min-m", "12", "--max-m", "14", "--trace", "yes"}};
  for (const auto& args : cases) {
    const auto a = run(args), b = run(args);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
  }
  // Thread count does not change sampled results.
  CHECK(run(cases[0]).out == run(cases[1]).out);
  auto other_seed = cases[0];
  other_seed[12] = "8";
  CHECK(run(other_seed).out != run(cases[0]).out);
}

TEST_CASE("config round trip") {
  cli::RunConfig c;
  c.command = "freq";
  c.system = "3,2,1";
  c.format = cli::Format::csv;
  c.digits = 9;
  c.seed = 42;
  c.threads = 2;
  c.params = {{"seq", "lucas"}, {"s", "3"}, {"count", "200"}};
  CHECK(cli::RunConfig::from_json(nlohmann::ordered_json::parse(c.to_json().dump())) == c);

  const std::vector<std::string> args = {"freq", "--block", "2,1", "--seq", "power:3", "--s", "3", "--count", "300",
                                         "--format", "csv", "--digits", "8"};
  auto with_print = args;
  with_print.push_back("--print-config");
  const auto printed = run(with_print);
  REQUIRE(printed.code == 0);
  const auto cfg = cli::RunConfig::from_json(nlohmann::ordered_json::parse(printed.out));
  CHECK(cfg.system == "2,1");
  CHECK(cfg.digits == 8);
  CHECK(cfg.params.at("seq") == "power:3");

  const std::string path = "test_cli_config.json";
  {
    std::ofstream f(path);
    f << printed.out;
  }
  const auto replayed = run({"--config", path});
  std::remove(path.c_str());
  CHECK(replayed.code == 0);
  CHECK(replayed.out == run(args).out);
}

TEST_CASE("remaining subcommands agree with the library") {
  const NumerationSystem fib({1, 0});

  const auto blocks = nlohmann::json::parse(run({"blocks", "--block", "2,1", "--s", "3", "--format", "json"}).out);
  CHECK(blocks["blocks"].size() == enumerate_blocks(3, NumerationSystem({2, 1})).size());

  const auto re = nlohmann::json::parse(run({"real-expand", "--beta", "omega", "--depth", "5", "--format", "json"}).out);
  CHECK(re["digits"] == nlohmann::json::array({1, 0, 0, 0, 0}));
  CHECK(re["terminates"] == true);

  const auto conc =
      nlohmann::json::parse(run({"concentrate", "--a", "omega", "--s", "9", "--format", "json"}).out);
  CHECK(conc["block"] == nlohmann::json::array({1, 0, 1, 0, 0, 0, 0, 0, 0}));
  CHECK(conc["on_boundary"] == true);

  const auto osc = nlohmann::json::parse(
      run({"oscillate", "--a", "1", "--lb", "1,0,0", "--min-m", "10", "--max-m", "12", "--format", "json"}).out);
  CHECK(std::abs(osc["limsup"].get<double>() - 0.7236) < 1e-3);
  CHECK(osc["liminf"].get<double>() < osc["limsup"].get<double>());

  const auto eq = nlohmann::json::parse(
      run({"equidist", "--seq", "power:2", "--count", "2000", "--format", "json"}).out);
  const auto fr = fractional_parts(generate(SequenceSpec::power(2), 2000), LimitProfile::benford(fib), fib);
  CHECK(std::abs(eq["star_discrepancy"].get<double>() - star_discrepancy(fr)) < 1e-11);

  const auto abs = nlohmann::json::parse(
      run({"absolute", "--seq", "lucas", "--systems", "1,0;9,9", "--s-max", "3", "--count", "1000", "--format", "json"})
          .out);
  CHECK(abs["reports"].size() == 6);
  CHECK(!abs["flags"].empty());
}
