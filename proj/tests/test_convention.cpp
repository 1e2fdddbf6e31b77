#include <catch2/catch_amalgamated.hpp>

#include "postlb/convention.hpp"
#include "postlb/random.hpp"

using namespace postlb;

namespace {

// the worked four-run example: split at 15, first part right-aligned at 14,
// second part left-aligned at 15
Convention table1_convention() {
  Convention conv;
  conv.split = 15;
  conv.first_anchor = 14;
  conv.second_anchor = 15;
  conv.initial_head = 0;
  conv.answer_box = 0;
  return conv;
}

}  // namespace

TEST_CASE("layout reproduces the four-run example", "[convention][golden]") {
  Convention conv = table1_convention();
  CHECK(layout({"mbm", "mbbm"}, conv).marked() == std::set<Address>{12, 14, 15, 18});
  CHECK(layout({"mmbm", "mbmm"}, conv).marked() ==
        std::set<Address>{11, 12, 14, 15, 17, 18});
  CHECK(layout({"mbm", "mbmm"}, conv).marked() == std::set<Address>{12, 14, 15, 17, 18});
  CHECK(layout({"mmbm", "mbbm"}, conv).marked() == std::set<Address>{11, 12, 14, 15, 18});
}

TEST_CASE("partition_of splits at the boundary", "[convention]") {
  Convention conv = table1_convention();
  CHECK(partition_of(conv, 14) == PartitionId::First);
  CHECK(partition_of(conv, 15) == PartitionId::Second);

  Convention zero;  // default: split at 0
  CHECK(partition_of(zero, -1) == PartitionId::First);
  CHECK(partition_of(zero, 0) == PartitionId::Second);
}

TEST_CASE("read_verdict honors the answer-box rule", "[convention]") {
  Convention conv;  // answer_box 0, marked means accept
  SymbolSpace marked{{0}};
  SymbolSpace blank;
  CHECK(read_verdict(conv, marked) == Verdict::Accept);
  CHECK(read_verdict(conv, blank) == Verdict::Reject);

  conv.answer_marked_means = Verdict::Reject;
  CHECK(read_verdict(conv, marked) == Verdict::Reject);
  CHECK(read_verdict(conv, blank) == Verdict::Accept);
}

TEST_CASE("the default convention places parts around the origin", "[convention]") {
  Convention conv;
  CHECK(conv.initial_head == 0);
  CHECK(conv.split == 0);
  CHECK(conv.first_anchor == -1);
  CHECK(conv.second_anchor == 0);
  CHECK(layout({"m", "m"}, conv).marked() == std::set<Address>{-1, 0});
}

TEST_CASE("inputs and conventions are validated", "[convention][errors]") {
  Convention conv;
  CHECK_THROWS_AS(layout({"", "m"}, conv), std::invalid_argument);
  CHECK_THROWS_AS(layout({"m", "mxb"}, conv), std::invalid_argument);

  Convention bad;
  bad.first_anchor = 3;  // not inside the first partition
  bad.split = 0;
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);
  bad = Convention{};
  bad.second_anchor = -2;
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);
}

TEST_CASE("convention and input files round-trip", "[convention][io]") {
  Convention conv = table1_convention();
  conv.answer_marked_means = Verdict::Reject;
  Convention parsed = parse_convention(convention_to_text(conv));
  CHECK(parsed.initial_head == conv.initial_head);
  CHECK(parsed.split == conv.split);
  CHECK(parsed.first_anchor == conv.first_anchor);
  CHECK(parsed.second_anchor == conv.second_anchor);
  CHECK(parsed.answer_box == conv.answer_box);
  CHECK(parsed.answer_marked_means == conv.answer_marked_means);

  BipartiteInput input{"mbm", "mbbm"};
  BipartiteInput back = parse_bipartite_input(bipartite_input_to_text(input));
  CHECK(back.first == input.first);
  CHECK(back.second == input.second);

  CHECK_THROWS_AS(parse_bipartite_input("first: mbm"), ParseError);
  CHECK_THROWS_AS(parse_bipartite_input("first: mbm\nsecond: xyz"), std::invalid_argument);
  CHECK_THROWS_AS(parse_convention("split=abc"), ParseError);
  CHECK_THROWS_AS(parse_convention("color=red"), ParseError);
}

TEST_CASE("inputs sharing a part agree on that partition", "[convention][property]") {
  Rng rng(404);
  for (int trial = 0; trial < 300; ++trial) {
    Convention conv = random_convention(rng);
    std::string shared_first = random_part(rng, 8);
    SymbolSpace a = layout({shared_first, random_part(rng, 8)}, conv);
    SymbolSpace b = layout({shared_first, random_part(rng, 8)}, conv);
    for (Address box : a.marked())
      if (partition_of(conv, box) == PartitionId::First) CHECK(b.is_marked(box));
    for (Address box : b.marked())
      if (partition_of(conv, box) == PartitionId::First) CHECK(a.is_marked(box));

    std::string shared_second = random_part(rng, 8);
    SymbolSpace c = layout({random_part(rng, 8), shared_second}, conv);
    SymbolSpace d = layout({random_part(rng, 8), shared_second}, conv);
    for (Address box : c.marked())
      if (partition_of(conv, box) == PartitionId::Second) CHECK(d.is_marked(box));
    for (Address box : d.marked())
      if (partition_of(conv, box) == PartitionId::Second) CHECK(c.is_marked(box));
  }
}

TEST_CASE("layout is injective at fixed part lengths", "[convention][property]") {
  Rng rng(505);
  for (int trial = 0; trial < 300; ++trial) {
    Convention conv = random_convention(rng);
    BipartiteInput p{random_part(rng, 6), random_part(rng, 6)};
    BipartiteInput q{random_part(rng, 6), random_part(rng, 6)};
    q.first.resize(p.first.size(), 'b');
    q.second.resize(p.second.size(), 'b');
    if (p.first == q.first && p.second == q.second) continue;
    CHECK(!(layout(p, conv) == layout(q, conv)));
  }
}

TEST_CASE("every address lands in exactly one partition", "[convention][property]") {
  Rng rng(606);
  for (int trial = 0; trial < 100; ++trial) {
    Convention conv = random_convention(rng);
    for (Address box = -12; box <= 12; ++box) {
      PartitionId id = partition_of(conv, box);
      CHECK(((id == PartitionId::First) == (box < conv.split)));
    }
  }
}
