#include <doctest.h>

#include "support.hpp"
#include "xinfl/error.hpp"
#include "xinfl/experiment.hpp"
#include "xinfl/parser/model.hpp"

using namespace xinfl;

namespace {

Treebank singleton() {
  Treebank tb;
  tb.sentences.push_back(testing::make_sentence({"the", "dog", "barked", "loudly", "."}, {2, 3, 0, 3, 3},
                                                {"det", "nsubj", "root", "advmod", "punct"},
                                                {"DET", "NOUN", "VERB", "ADV", "PUNCT"}));
  return tb;
}

Treebank strip(Treebank tb) {
  for (auto& s : tb.sentences)
    for (auto& t : s.tokens) {
      t.head = 0;
      t.deprel = "_";
    }
  return tb;
}

}  // namespace

TEST_CASE("parser kind names") {
  CHECK(parse_parser_kind("gb") == ParserKind::kGB);
  CHECK(parse_parser_kind("SL") == ParserKind::kSL);
  CHECK(to_string(ParserKind::kSL) == "sl");
  CHECK_THROWS_AS(parse_parser_kind("lstm"), UsageError);
}

TEST_CASE("memorizes a single sentence") {
  auto tb = singleton();
  for (ParserKind kind : {ParserKind::kGB, ParserKind::kSL}) {
    auto model = train_parser(kind, tb, 5, 1);
    auto out = parse(model, strip(tb).sentences[0]);
    CHECK(out.heads() == tb.sentences[0].heads());
    for (std::size_t i = 0; i < out.size(); ++i) CHECK(out.tokens[i].deprel == tb.sentences[0].tokens[i].deprel);
  }
}

TEST_CASE("one-token input gets the root deprel") {
  auto s = testing::make_sentence({"hi"}, {0}, {"_"});
  for (ParserKind kind : {ParserKind::kGB, ParserKind::kSL}) {
    auto m = train_parser(kind, singleton(), 2, 1);
    auto out = parse(m, s);
    CHECK(out.tokens[0].head == 0);
    CHECK(out.tokens[0].deprel == "root");
  }
}

TEST_CASE("empty treebank is a usage error") {
  CHECK_THROWS_AS(train_parser(ParserKind::kGB, Treebank{}, 1, 1), UsageError);
  CHECK_THROWS_AS(train_parser(ParserKind::kSL, Treebank{}, 1, 1), UsageError);
}

TEST_CASE("learns a toy grammar") {
  auto train = testing::toy_pair(1, 50, 0, 0).source_train;
  auto held = testing::toy_pair(2, 100, 0, 0).source_train;
  for (ParserKind kind : {ParserKind::kGB, ParserKind::kSL}) {
    auto model = train_parser(kind, train, 10, 42);
    auto score = attachment_scores(held, parse_treebank(model, held));
    INFO("kind " << to_string(kind) << " UAS " << score.uas);
    CHECK(score.uas >= 90.0);
  }
}

TEST_CASE("output is always a valid tree") {
  SplitMix64 rng(9);
  auto train = testing::random_treebank(rng, 30, 10);
  auto test = testing::random_treebank(rng, 60, 12);
  for (ParserKind kind : {ParserKind::kGB, ParserKind::kSL}) {
    auto model = train_parser(kind, train, 3, 7);
    for (const auto& s : parse_treebank(model, test).sentences) CHECK(validate_tree(s).empty());
  }
}

TEST_CASE("training is deterministic and serializable") {
  auto train = testing::toy_pair(4, 40, 0, 0).source_train;
  for (ParserKind kind : {ParserKind::kGB, ParserKind::kSL}) {
    auto a = train_parser(kind, train, 4, 42);
    auto b = train_parser(kind, train, 4, 42);
    CHECK(a == b);
    CHECK(a.serialize() == b.serialize());
    auto back = ParserModel::parse(a.serialize());
    CHECK(back == a);
    auto test = testing::toy_pair(5, 20, 0, 0).source_train;
    CHECK(parse_treebank(back, test) == parse_treebank(a, test));
    CHECK(parse_treebank(a, test, 4) == parse_treebank(a, test, 1));
  }
  CHECK_THROWS_AS(ParserModel::parse("nonsense\n"), ParseError);
}

TEST_CASE("feature templates") {
  auto s = singleton().sentences[0];
  auto f = arc_features(s, 3, 2);
  CHECK_FALSE(f.empty());
  CHECK(f != arc_features(s, 3, 4));
  CHECK_FALSE(token_features(s, 1).empty());
}
