#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "hats/adversary.hpp"
#include "hats/cli.hpp"
#include "hats/freesubset.hpp"
#include "hats/serialize.hpp"
#include "hats/strategies.hpp"

using namespace hats;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome hatlab(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  bool quoted = false;
  for (char ch : s) {
    if (ch == '"') quoted = !quoted;
    else if (ch == sep && !quoted) {
      parts.push_back(cur);
      cur.clear();
    } else cur += ch;
  }
  parts.push_back(cur);
  return parts;
}

}  // namespace

TEST_CASE("play exit codes") {
  CHECK(hatlab({"play", "--spec", "(3,3,2)", "--strategy", "modular-sum", "--coloring", "0,1,2"}).code == 0);
  CHECK(hatlab({"play", "--spec", "(3,3,2)", "--strategy", "modular-sum", "--coloring", "0,1,5"}).code == 2);
  CHECK(hatlab({"play", "--spec", "chain(5)", "--strategy", "neighbor", "--coloring", "2,2,2,2,2"}).code == 0);
  // A strictly decreasing window has no ascent and nobody wins.
  CHECK(hatlab({"play", "--spec", "chain(4)", "--strategy", "neighbor", "--coloring", "4,3,2,1"}).code == 1);

  auto bad = hatlab({"play", "--spec", "(3,3,2)", "--strategy", "telepathy", "--coloring", "0,1,2"});
  CHECK(bad.code == 2);
  for (const auto& name : cli::strategy_names()) CHECK(bad.err.find(name) != std::string::npos);
  CHECK(hatlab({"play", "--spec", "(3,3"}).code == 2);
  CHECK(hatlab({"juggle"}).code == 2);
}

TEST_CASE("play transcript") {
  auto r = hatlab({"play", "--spec", "(3,3,2)", "--strategy", "modular-sum", "--coloring", "0,1,2"});
  auto j = Json::parse(r.out);
  REQUIRE(j.contains("transcript"));
  CHECK(j["strategy"] == "modular-sum");
  auto t = run_game(GameSpec::finite_game(3, 3, 2), modular_sum(3), Coloring::table({0, 1, 2}), 64);
  CHECK(j["transcript"] == to_json(t));
}

TEST_CASE("sweep table") {
  auto r = hatlab({"sweep", "--lambdas", "1,2,3", "--gammas", "2,3", "--kappas", "1-8"});
  REQUIRE(r.code == 0);
  std::istringstream lines(r.out);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "lambda,gamma,kappa,verdict,method,colorings_checked,profiles_checked,certificate");
  int rows = 0;
  while (std::getline(lines, line)) {
    auto f = split(line, ',');
    REQUIRE(f.size() == 8);
    int lambda = std::stoi(f[0]), gamma = std::stoi(f[1]), kappa = std::stoi(f[2]);
    CHECK(f[3] == (kappa <= lambda * (gamma - 1) ? "WINNING" : "LOSING"));
    if (lambda == 2 && gamma == 2 && kappa == 3) CHECK(f[6] == "729");
    ++rows;
  }
  CHECK(rows == 48);
}

TEST_CASE("defeat") {
  auto r = hatlab({"defeat", "--poset", "data/diamond.json", "--strategy", "sampled", "--k", "3", "--g", "1"});
  CHECK(r.code == 0);
  auto j = Json::parse(r.out);
  CHECK(j.contains("certificate"));

  auto lose = hatlab({"defeat", "--spec", "(3,4,2)", "--strategy", "modular-sum"});
  CHECK(lose.code == 0);
  auto win = hatlab({"defeat", "--spec", "(3,3,2)", "--strategy", "modular-sum"});
  CHECK(win.code == 1);
  auto refused = hatlab({"defeat", "--poset", "data/diamond.json", "--strategy", "sampled", "--k", "1", "--g", "1"});
  CHECK(refused.code == 2);
}

TEST_CASE("free subsets") {
  auto r = hatlab({"free", "--family", "data/sum_mod_10.json", "--mode", "mutual"});
  REQUIRE(r.code == 0);
  auto j = Json::parse(r.out);
  auto got = j["subset"].get<std::vector<Value>>();
  // Brute force over all subsets of {0..9}: largest sum-free set mod 10, least first.
  std::vector<Value> best;
  for (unsigned m = 0; m < 1024; ++m) {
    std::vector<Value> s;
    for (Value v = 0; v < 10; ++v)
      if (m >> v & 1) s.push_back(v);
    bool ok = true;
    for (Value a : s)
      for (Value x : s)
        for (Value y : s)
          if (x != a && y != a && (x + y) % 10 == a) ok = false;
    if (ok && (s.size() > best.size() || (s.size() == best.size() && s < best))) best = s;
  }
  CHECK(got == best);

  CHECK(hatlab({"free", "--family", "data/succ_mod_10.json", "--mode", "forwards", "--subset", "0,1"}).code == 0);
  CHECK(hatlab({"free", "--family", "data/succ_mod_10.json", "--mode", "mutual", "--subset", "0,1"}).code == 1);
  CHECK(hatlab({"free", "--family", "data/missing.json"}).code == 2);
}

TEST_CASE("refute") {
  auto r = hatlab({"refute", "--N", "20", "--trials", "100000", "--strategy", "constant-guess"});
  REQUIRE(r.code == 0);
  auto j = Json::parse(r.out);
  CHECK(j["interval"][1].get<double>() < 0.52);
  CHECK(j["trials"] == 100000);
}

TEST_CASE("fixed seeds give identical bytes") {
  std::vector<std::string> args{"refute", "--N", "12", "--trials", "3000", "--seed", "99", "--strategy", "sampled"};
  CHECK(hatlab(args).out == hatlab(args).out);
  std::vector<std::string> d{"defeat", "--poset", "data/diamond.json", "--strategy", "sampled", "--k", "3", "--g", "1",
                             "--seed", "4"};
  CHECK(hatlab(d).out == hatlab(d).out);
}

TEST_CASE("convert") {
  auto part = hatlab({"convert", "--family", "data/succ_mod_10.json", "--to", "partition"});
  REQUIRE(part.code == 0);
  auto p = partition_from_json(Json::parse(part.out));
  auto fam = family_from_json(Json::parse(read_file("data/succ_mod_10.json")));
  CHECK(p == family_to_partition(fam));

  for (std::string to : {"single", "sets", "closed"}) {
    auto r = hatlab({"convert", "--family", "data/sum_mod_10.json", "--to", to, "--gamma", "2"});
    CHECK(r.code == 0);
    CHECK_NOTHROW(family_from_json(Json::parse(r.out)));
  }
  auto table = hatlab({"convert", "--to", "table", "--spec", "chain(4)", "--strategy", "neighbor", "--N", "3", "--k", "3"});
  CHECK(table.code == 0);
  CHECK(hatlab({"convert", "--to", "table"}).code == 2);
}

TEST_CASE("output file") {
  auto path = (std::filesystem::temp_directory_path() / "hatlab_cli_test.json").string();
  std::filesystem::remove(path);
  auto r = hatlab({"free", "--family", "data/sum_mod_10.json", "--out", path});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  CHECK(read_json_file(path)["size"] == 5);
  std::filesystem::remove(path);
}

TEST_CASE("serialization roundtrips") {
  for (auto spec : {GameSpec::finite_game(3, 4, 2), parse_spec("(w,ord,w)", 0), parse_spec("parity(6)"),
                    GameSpec{Population::finite(4), Visibility::order(Poset::chain(4)), Palette::finite(3),
                             GuessBound::at_most(1)}})
    CHECK(spec_from_json(to_json(spec)) == spec);

  auto c = Coloring::table({Color(3), Color(Ordinal::omega()), Color(0)});
  CHECK(coloring_from_json(to_json(c, 3)).prefix(3) == c.prefix(3));
  auto g = Coloring::generated(ColorDistribution::block_geometric(), 12);
  auto g2 = coloring_from_json(to_json(g, 0));
  for (LogicianId i = 0; i < 30; ++i) CHECK(g2.at(i) == g.at(i));

  for (const auto& p : unlabeled_posets(4)) CHECK(poset_from_json(to_json(p)) == p);

  auto fam = family_from_json(Json::parse(read_file("data/sum_mod_10.json")));
  CHECK(family_from_json(to_json(fam)) == fam);
  auto closed = close_family(fam, 2, 1).family;
  CHECK(family_from_json(to_json(closed)) == closed);
  auto part = family_to_partition(fam);
  CHECK(partition_from_json(to_json(part)) == part);

  CHECK(parse_color("w^2 + 1") == Color(parse_ordinal("w^2 + 1")));
  CHECK(parse_color_list("1, 2,3") == std::vector<Color>{1, 2, 3});
  CHECK_THROWS(parse_spec("(1,2)"));
}
