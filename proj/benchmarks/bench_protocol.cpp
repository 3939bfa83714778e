#include "ciota/chain.hpp"

#include "ciota/agent.hpp"
#include "ciota/chain_codec.hpp"
#include "ciota/signature.hpp"
#include "ciota/simnet.hpp"

#include <benchmark/benchmark.h>

using namespace ciota;

namespace {

AgentState bench_agent(const std::string& id, const SignatureProvider& signer) {
  ModelParams params;
  params.window_k = 16;
  params.t_grace = 0.0;
  ProtocolParams proto;
  proto.block_size = 20;
  AgentState agent(id, params, proto, "bench-app", "1");
  agent.keys = signer.keypair_from_seed(seed_from_label("bench:" + id));
  agent.local_model.add(0, 1, 50);
  agent.local_model.add(1, 0, 50);
  return agent;
}

} // namespace

static void BM_sign_mock(benchmark::State& state) {
  KeyedHashSigner signer;
  KeyPair keys = signer.keypair_from_seed(seed_from_label("mock"));
  Bytes message(512, 0x5a);
  for (auto _ : state) {
    benchmark::DoNotOptimize(signer.sign(keys.secret, message));
  }
}
BENCHMARK(BM_sign_mock);

static void BM_sign_ed25519(benchmark::State& state) {
  Ed25519Signer signer;
  KeyPair keys = signer.keypair_from_seed(seed_from_label("ed"));
  Bytes message(512, 0x5a);
  for (auto _ : state) {
    benchmark::DoNotOptimize(signer.sign(keys.secret, message));
  }
}
BENCHMARK(BM_sign_ed25519);

static void BM_verify_ed25519(benchmark::State& state) {
  Ed25519Signer signer;
  KeyPair keys = signer.keypair_from_seed(seed_from_label("ed"));
  Bytes message(512, 0x5a);
  const Bytes signature = signer.sign(keys.secret, message);
  for (auto _ : state) {
    benchmark::DoNotOptimize(signer.verify(keys.public_key, message, signature));
  }
}
BENCHMARK(BM_verify_ed25519);

static void BM_contribute_record(benchmark::State& state) {
  KeyedHashSigner signer;
  AgentState agent = bench_agent("bench-a", signer);
  const Chain genesis = Chain::genesis("bench-app", "1");
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        contribute_record(agent, *genesis.partial(), 1.0, signer));
  }
}
BENCHMARK(BM_contribute_record);

static void BM_validate_partial_20(benchmark::State& state) {
  KeyedHashSigner signer;
  Keyring keyring;
  std::vector<AgentState> agents;
  for (int i = 0; i < 19; ++i) {
    agents.push_back(bench_agent("bench-" + std::to_string(i), signer));
    keyring.emplace(agents.back().id, agents.back().keys.public_key);
  }
  Chain chain = Chain::genesis("bench-app", "1");
  for (auto& agent : agents) {
    auto grown = contribute_record(agent, *chain.partial(), 1.0, signer);
    chain = Chain(chain.blocks(),
                  std::make_shared<const PartialBlock>(std::move(*grown)));
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(validate_partial(*chain.partial(), 20, keyring, signer));
  }
}
BENCHMARK(BM_validate_partial_20);

static void BM_sim_complete_200(benchmark::State& state) {
  const Topology topo = gen_complete(200);
  for (auto _ : state) {
    SimConfig config;
    config.n_agents = 200;
    config.block_size = 160;
    config.seed = 5;
    benchmark::DoNotOptimize(run_simulation(config, topo));
  }
}
BENCHMARK(BM_sim_complete_200);

BENCHMARK_MAIN();
