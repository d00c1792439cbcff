#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "bdos/ledger.hpp"
#include "bdos/model.hpp"

using namespace bdos;

namespace {

GameParams base_params()
{
    GameParams p;
    p.alpha_a = 0.2;
    p.gamma = 0.5;
    p.lambda = 1.0 / 600.0;
    p.block_reward = 12.5;
    p.miners = {{0.8, 1.0}};
    return p;
}

}  // namespace

TEST_CASE("validate accepts a normalized scenario")
{
    CHECK(!validate(base_params()));
}

TEST_CASE("validate flags power that does not sum to one")
{
    GameParams p = base_params();
    p.miners = {{0.7, 1.0}};
    CHECK(validate(p) == ParamError::PowerNotNormalized);
}

TEST_CASE("validate flags gamma outside the unit interval")
{
    GameParams p = base_params();
    p.gamma = 1.2;
    CHECK(validate(p) == ParamError::GammaOutOfRange);
}

TEST_CASE("validate flags non-positive parameters")
{
    GameParams p = base_params();
    p.lambda = 0.0;
    CHECK(validate(p) == ParamError::NonPositiveParameter);

    p = base_params();
    p.miners[0].cost = -1.0;
    CHECK(validate(p) == ParamError::NonPositiveParameter);

    p = base_params();
    p.alpha_a = 0.2 + 1e-6;  // breaks normalization, not positivity
    CHECK(validate(p) == ParamError::PowerNotNormalized);
}

TEST_CASE("validate accepts exactly the parameter sets satisfying the invariants")
{
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> count(1, 5);
    for (int trial = 0; trial < 2000; ++trial) {
        GameParams p;
        p.gamma = unit(rng) * 1.5 - 0.25;  // sometimes out of range
        p.lambda = unit(rng) * 2.0 - 0.5;
        p.block_reward = unit(rng) * 2.0 - 0.5;
        int n = count(rng);
        std::vector<double> draws(n + 1);
        double total = 0.0;
        for (double& d : draws) {
            d = unit(rng) + 1e-3;
            total += d;
        }
        bool normalize = trial % 3 != 0;
        double scale = normalize ? 1.0 / total : 1.0;
        p.alpha_a = draws[0] * scale;
        for (int i = 0; i < n; ++i) {
            p.miners.push_back({draws[i + 1] * scale, unit(rng) * 2.0 - 0.2});
        }

        bool gamma_ok = p.gamma >= 0.0 && p.gamma <= 1.0;
        bool positives_ok = p.lambda > 0.0 && p.block_reward > 0.0 && p.alpha_a >= 0.0 &&
                            p.alpha_a < 1.0;
        double sum = p.alpha_a;
        for (const auto& m : p.miners) {
            positives_ok = positives_ok && m.alpha > 0.0 && m.cost > 0.0;
            sum += m.alpha;
        }
        bool normalized_ok = std::abs(sum - 1.0) <= POWER_TOLERANCE;
        CHECK(!validate(p) == (gamma_ok && positives_ok && normalized_ok));
    }
}

namespace {

Block make_block(BlockId id, std::optional<BlockId> parent, int owner, int height)
{
    return Block{id, parent, owner, false, height};
}

}  // namespace

TEST_CASE("main_chain of a genesis-only view is the genesis")
{
    LedgerView view;
    view.add_full(make_block(0, std::nullopt, NOBODY_ID, 0));
    CHECK(main_chain(view) == std::vector<BlockId>{0});
}

TEST_CASE("main_chain breaks height ties by first-seen order")
{
    LedgerView view;
    view.add_full(make_block(0, std::nullopt, NOBODY_ID, 0));
    // Two full chains of length 2; the tip seen earlier wins.
    view.add_full(make_block(1, 0, 0, 1));
    view.add_full(make_block(10, 1, 0, 2));  // order index 2
    view.add_full(make_block(2, 0, 1, 1));
    view.add_full(make_block(20, 2, 1, 2));  // order index 4
    CHECK(main_chain(view) == std::vector<BlockId>{0, 1, 10});

    LedgerView reversed;
    reversed.add_full(make_block(0, std::nullopt, NOBODY_ID, 0));
    reversed.add_full(make_block(2, 0, 1, 1));
    reversed.add_full(make_block(20, 2, 1, 2));
    reversed.add_full(make_block(1, 0, 0, 1));
    reversed.add_full(make_block(10, 1, 0, 2));
    CHECK(main_chain(reversed) == std::vector<BlockId>{0, 2, 20});
}

TEST_CASE("main_chain never selects header-only blocks or their children")
{
    LedgerView view;
    view.add_full(make_block(0, std::nullopt, NOBODY_ID, 0));
    view.add_full(make_block(1, 0, 0, 1));
    view.add_full(make_block(2, 1, 0, 2));
    Block header = make_block(3, 2, ADVERSARY_ID, 3);
    header.header_only = true;
    view.add_header(header);
    CHECK(main_chain(view) == std::vector<BlockId>{0, 1, 2});

    // A full block whose parent is header-only is still ineligible.
    view.add_full(make_block(4, 3, 1, 4));
    CHECK(main_chain(view) == std::vector<BlockId>{0, 1, 2});
}

TEST_CASE("main_chain returns a connected parent path of full blocks from genesis")
{
    std::mt19937 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        LedgerView view;
        view.add_full(make_block(0, std::nullopt, NOBODY_ID, 0));
        std::vector<Block> pool{make_block(0, std::nullopt, NOBODY_ID, 0)};
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        int blocks = 2 + static_cast<int>(unit(rng) * 30);
        for (BlockId id = 1; id <= blocks; ++id) {
            const Block& parent = pool[static_cast<std::size_t>(unit(rng) * pool.size())];
            Block b = make_block(id, parent.id, static_cast<int>(id % 3), parent.height + 1);
            if (!parent.header_only && unit(rng) < 0.8) {
                view.add_full(b);
                pool.push_back(b);
            } else {
                b.header_only = true;
                view.add_header(b);
                pool.push_back(b);
            }
        }

        auto chain = main_chain(view);
        REQUIRE(!chain.empty());
        CHECK(chain.front() == 0);
        for (std::size_t i = 0; i < chain.size(); ++i) {
            const Block* b = view.find(chain[i]);
            REQUIRE(b != nullptr);
            CHECK(!b->header_only);
            CHECK(b->height == static_cast<int>(i));
            if (i > 0) {
                REQUIRE(b->parent.has_value());
                CHECK(*b->parent == chain[i - 1]);
            }
        }
    }
}
