#include "ciota/protocol.hpp"

#include "ciota/rng.hpp"
#include "ciota/traces.hpp"

#include <doctest.h>

#include <functional>
#include <memory>

using namespace ciota;

namespace {

constexpr double kAlpha = 0.05;

ModelParams params_with_alpha() {
  ModelParams p;
  p.window_k = 4;
  p.t_grace = 0.0;
  p.alpha = kAlpha;
  p.p_a = 0.25;
  return p;
}

struct ProtocolFixture {
  std::shared_ptr<KeyedHashSigner> signer = std::make_shared<KeyedHashSigner>();
  Keyring keyring;
  std::vector<AgentState> agents;
  std::unique_ptr<CryptoReceivePolicy> policy;
  std::size_t block_size;

  explicit ProtocolFixture(std::size_t n, std::size_t block_size_)
      : block_size(block_size_) {
    ProtocolParams proto;
    proto.block_size = block_size;
    for (std::size_t i = 0; i < n; ++i) {
      AgentState agent("p" + std::to_string(i), params_with_alpha(), proto,
                       "app", "1");
      agent.keys = signer->keypair_from_seed(seed_from_label("pk:" + agent.id));
      // identical clean base model: two regions bouncing between each other
      agent.local_model.add(0, 1, 8);
      agent.local_model.add(1, 0, 8);
      keyring.emplace(agent.id, agent.keys.public_key);
      agents.push_back(std::move(agent));
    }
    policy = std::make_unique<CryptoReceivePolicy>(block_size, keyring, signer);
  }

  /// Evolve a fresh genesis chain by letting the given agents contribute in
  /// order (close happens automatically at block_size).
  std::shared_ptr<const Chain> chain_of(const std::vector<std::size_t>& order) {
    Chain chain = Chain::genesis("app", "1");
    for (std::size_t index : order) {
      auto grown =
          contribute_record(agents[index], *chain.partial(), 1.0, *signer);
      REQUIRE(grown.has_value());
      chain = close_if_full(
          Chain(chain.blocks(),
                std::make_shared<const PartialBlock>(std::move(*grown))),
          block_size);
    }
    return std::make_shared<const Chain>(std::move(chain));
  }
};

} // namespace

TEST_CASE("shorter chains are discarded") {
  ProtocolFixture fx(4, 2);
  AgentState& receiver = fx.agents[0];
  receiver.chain = fx.chain_of({1, 2}); // one closed block
  REQUIRE(receiver.chain->length() == 1);

  auto shorter = fx.chain_of({3});
  auto out = receive_chain(receiver, shorter, fx.agents[3].id, 1.0, *fx.policy);
  CHECK(out.decision == Decision::discard);
  CHECK_FALSE(out.reported);
  CHECK(receiver.chain->length() == 1);
}

TEST_CASE("longer valid chains are adopted with their combined model") {
  ProtocolFixture fx(4, 2);
  AgentState& receiver = fx.agents[0];
  receiver.window.push(0.9); // must be cleared by adoption
  receiver.current_state = 1;

  auto longer = fx.chain_of({1, 2});
  REQUIRE(longer->length() == 1);

  auto out = receive_chain(receiver, longer, fx.agents[1].id, 1.0, *fx.policy);
  CHECK(out.decision == Decision::replace_chain_and_adopt);
  CHECK(receiver.chain == longer);

  // adopted model: filtered combination of the block's two records
  std::vector<const FrequencyMatrix*> block_models =
      longer->last_block()->models();
  CHECK(receiver.local_model == combine(block_models, receiver.params.p_a));
  CHECK_FALSE(receiver.window.mean().has_value());
  CHECK(receiver.current_state == 1);
}

TEST_CASE("longer chains with a bad last block are discarded silently") {
  ProtocolFixture fx(4, 2);
  AgentState& receiver = fx.agents[0];
  const FrequencyMatrix before = receiver.local_model;

  auto honest = fx.chain_of({1, 2});
  // forge the closed block: change one model after signing, rebuild the
  // partial so hash linkage still holds
  std::vector<Record> records = honest->last_block()->records();
  FrequencyMatrix mutated = *records[0].model;
  mutated.add(30, 31, 5);
  records[0].model = std::make_shared<const FrequencyMatrix>(std::move(mutated));
  auto forged_block = std::make_shared<const Block>(
      honest->last_block()->meta(), std::move(records));
  BlockMeta next_meta = honest->partial()->meta();
  next_meta.prev_hash = forged_block->digest();
  auto forged = std::make_shared<const Chain>(
      std::vector<std::shared_ptr<const Block>>{forged_block},
      std::make_shared<const PartialBlock>(next_meta, std::vector<Record>{}));

  auto out = receive_chain(receiver, forged, fx.agents[1].id, 1.0, *fx.policy);
  CHECK(out.decision == Decision::discard);
  CHECK_FALSE(out.reported);
  CHECK(receiver.chain->length() == 0);
  CHECK(receiver.local_model == before);
}

TEST_CASE("structurally broken chains are reported") {
  ProtocolFixture fx(3, 5);
  AgentState& receiver = fx.agents[0];

  auto honest = fx.chain_of({1, 2});
  BlockMeta meta = honest->partial()->meta();
  meta.block_index = 42;
  auto broken = std::make_shared<const Chain>(
      honest->blocks(), std::make_shared<const PartialBlock>(
                            meta, honest->partial()->records()));

  bool saw_alert = false;
  receiver.alert_sink = [&](const Alert& alert) {
    saw_alert = alert.kind == Alert::Kind::rejected_block;
  };
  auto out = receive_chain(receiver, broken, fx.agents[1].id, 1.0, *fx.policy);
  CHECK(out.decision == Decision::discard);
  CHECK(out.reported);
  CHECK(saw_alert);
}

TEST_CASE("equal length: a strictly longer valid similar partial wins") {
  ProtocolFixture fx(5, 10);
  AgentState& receiver = fx.agents[0];
  receiver.chain = fx.chain_of({0}); // pb {p0}: effective 0 for p0

  auto incoming = fx.chain_of({1, 2}); // pb {p1,p2}: effective 2
  auto out = receive_chain(receiver, incoming, fx.agents[1].id, 1.0, *fx.policy);
  CHECK(out.decision == Decision::replace_chain);
  CHECK(receiver.chain == incoming);
}

TEST_CASE("replacement keeps the local chain when lengths tie") {
  ProtocolFixture fx(5, 10);
  AgentState& receiver = fx.agents[0];
  receiver.chain = fx.chain_of({0, 1}); // effective 1 for p0

  auto incoming = fx.chain_of({2}); // effective 1, different ids
  auto out = receive_chain(receiver, incoming, fx.agents[2].id, 1.0, *fx.policy,
                           /*direct_messaging_enabled=*/false);
  CHECK(out.decision == Decision::discard);
  CHECK(receiver.chain != incoming);
}

TEST_CASE("poisoned partials fail attestation") {
  ProtocolFixture fx(4, 10);
  AgentState& receiver = fx.agents[0];
  receiver.chain = fx.chain_of({0});

  SUBCASE("moderate poison: discard without report") {
    // one of two contributors redirects a third of its flow off-model;
    // combined distance lands in [alpha, 2*alpha)
    fx.agents[2].local_model.add(0, 9, 8);
    auto incoming = fx.chain_of({1, 2});
    bool alerted = false;
    receiver.alert_sink = [&](const Alert&) { alerted = true; };
    auto out =
        receive_chain(receiver, incoming, fx.agents[1].id, 1.0, *fx.policy);
    CHECK(out.decision == Decision::discard);
    CHECK_FALSE(out.reported);
    CHECK_FALSE(alerted);
    CHECK(receiver.chain != incoming);
  }

  SUBCASE("heavy poison: discard and report the sender") {
    fx.agents[2].local_model.add(0, 9, 24);
    auto incoming = fx.chain_of({1, 2});
    Alert seen;
    receiver.alert_sink = [&](const Alert& alert) { seen = alert; };
    auto out =
        receive_chain(receiver, incoming, fx.agents[1].id, 1.0, *fx.policy);
    CHECK(out.decision == Decision::discard);
    CHECK(out.reported);
    CHECK(seen.kind == Alert::Kind::rejected_agent);
    CHECK(seen.sender == fx.agents[1].id);
  }
}

TEST_CASE("tampered partial records are reported") {
  ProtocolFixture fx(4, 10);
  AgentState& receiver = fx.agents[0];
  receiver.chain = fx.chain_of({0});

  auto honest = fx.chain_of({1, 2});
  std::vector<Record> records = honest->partial()->records();
  FrequencyMatrix mutated = *records[1].model;
  mutated.add(50, 51, 2);
  records[1].model = std::make_shared<const FrequencyMatrix>(std::move(mutated));
  auto tampered = std::make_shared<const Chain>(
      honest->blocks(), std::make_shared<const PartialBlock>(
                            honest->partial()->meta(), std::move(records)));

  auto out = receive_chain(receiver, tampered, fx.agents[1].id, 1.0, *fx.policy);
  CHECK(out.decision == Decision::discard);
  CHECK(out.reported);
}

TEST_CASE("equal effective length with different ids triggers direct messages") {
  ProtocolFixture fx(6, 10);
  AgentState& receiver = fx.agents[0];
  receiver.chain = fx.chain_of({0, 1, 2}); // ids {p0,p1,p2}, effective 2

  auto incoming = fx.chain_of({3, 4}); // ids {p3,p4}, effective 2
  auto out = receive_chain(receiver, incoming, fx.agents[3].id, 1.0, *fx.policy);
  CHECK(out.decision == Decision::direct_message);
  CHECK(out.dm_targets == std::vector<AgentId>{"p3", "p4"});
  CHECK(receiver.chain != incoming); // conflict does not replace anything
}

TEST_CASE("k_dm counts qualifying conflicts before messaging") {
  ProtocolFixture fx(6, 10);
  AgentState& receiver = fx.agents[0];
  receiver.proto.k_dm = 2;
  receiver.chain = fx.chain_of({0, 1});

  auto first = fx.chain_of({2});
  auto out1 = receive_chain(receiver, first, fx.agents[2].id, 1.0, *fx.policy);
  CHECK(out1.decision == Decision::discard); // first conflict only counted

  auto second = fx.chain_of({3});
  auto out2 = receive_chain(receiver, second, fx.agents[3].id, 1.0, *fx.policy);
  CHECK(out2.decision == Decision::direct_message);
  CHECK(out2.dm_targets == std::vector<AgentId>{"p3"});
}

TEST_CASE("the same unchanged conflict never fires twice") {
  ProtocolFixture fx(6, 10);
  AgentState& receiver = fx.agents[0];
  receiver.chain = fx.chain_of({0, 1});

  auto incoming = fx.chain_of({2});
  auto out1 = receive_chain(receiver, incoming, fx.agents[2].id, 1.0, *fx.policy);
  CHECK(out1.decision == Decision::direct_message);

  auto out2 = receive_chain(receiver, incoming, fx.agents[2].id, 1.0, *fx.policy);
  CHECK(out2.decision == Decision::discard);
  CHECK(out2.reason == "conflict already considered");
}

TEST_CASE("receive rate is limited to the peer budget per interval") {
  ProtocolFixture fx(4, 10);
  AgentState& receiver = fx.agents[0];
  receiver.peer_budget = 2;
  receiver.proto.share_interval = 60.0;
  receiver.chain = fx.chain_of({0});

  auto incoming = fx.chain_of({1, 2});
  CHECK(receive_chain(receiver, incoming, "x", 1.0, *fx.policy).decision ==
        Decision::replace_chain);
  CHECK(receive_chain(receiver, incoming, "x", 2.0, *fx.policy).decision ==
        Decision::discard);
  CHECK(receive_chain(receiver, incoming, "x", 3.0, *fx.policy).decision ==
        Decision::dropped_rate_limited);
  // a new interval refills the budget
  CHECK(receive_chain(receiver, incoming, "x", 61.0, *fx.policy).decision !=
        Decision::dropped_rate_limited);
}

TEST_CASE("closed blocks attest for every honest same-generator agent") {
  // agents trained on the same behavior always accept each other's closed
  // blocks; checked across seeds with fresh generators
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    ProtocolFixture fx(5, 5);
    GroundTruthModel gt = make_uniform_model(6, 2, seed, 256);
    for (auto& agent : fx.agents) {
      Rng walk = Rng::derive(seed, 17 + std::hash<AgentId>{}(agent.id));
      agent.local_model = sample_model(gt, 20000, walk);
    }
    auto chain = fx.chain_of({0, 1, 2, 3, 4});
    REQUIRE(chain->length() == 1);
    const FrequencyMatrix combined =
        combine(chain->last_block()->models(), 0.25);
    for (const auto& agent : fx.agents) {
      CHECK(attest(agent.local_model, combined, kAlpha));
    }
  }
}

TEST_CASE("chain knowledge is monotone under arbitrary receives") {
  ProtocolFixture fx(6, 2);
  AgentState& receiver = fx.agents[0];
  Rng rng(404);

  std::vector<std::shared_ptr<const Chain>> pool;
  for (std::size_t blocks = 0; blocks <= 2; ++blocks) {
    for (int variant = 0; variant < 4; ++variant) {
      std::vector<std::size_t> order;
      for (std::size_t b = 0; b < 2 * blocks + rng.below(2); ++b) {
        order.push_back(1 + rng.below(5));
      }
      std::vector<std::size_t> unique_order;
      for (std::size_t id : order) {
        bool seen = false;
        for (std::size_t u : unique_order) seen |= (u == id);
        if (!seen) unique_order.push_back(id);
      }
      if (!unique_order.empty()) pool.push_back(fx.chain_of(unique_order));
    }
  }

  std::size_t last_len = receiver.chain->length();
  std::size_t last_eff = receiver.chain->partial()->effective_length(receiver.id);
  for (int step = 0; step < 200; ++step) {
    const auto& pick = pool[rng.below(pool.size())];
    receive_chain(receiver, pick, "someone", 1.0, *fx.policy);
    const std::size_t len = receiver.chain->length();
    CHECK(len >= last_len);
    const std::size_t eff =
        receiver.chain->partial()->effective_length(receiver.id);
    if (len == last_len) {
      CHECK(eff >= last_eff); // within one block index, never shrinks
    }
    last_len = len;
    last_eff = eff;
  }
}
