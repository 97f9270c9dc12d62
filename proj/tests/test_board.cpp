#include "hgsim/board.hpp"
#include "hgsim/world.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace hgsim;

namespace {

Observation free_at(int x, int y) { return {{x, y}, CellKind::Free, -1}; }

// Recomputes the frontier set from cell knowledge alone.
bool frontier_oracle(const OnlineBoard& b, CellPos p) {
    if (b.knowledge(p) != Knowledge::Unknown && b.knowledge(p) != Knowledge::Frontier) return false;
    const CellPos nbr[4] = {{p.x + 1, p.y}, {p.x - 1, p.y}, {p.x, p.y + 1}, {p.x, p.y - 1}};
    for (CellPos q : nbr) {
        if (!b.in_bounds(q)) continue;
        Knowledge k = b.knowledge(q);
        if (k == Knowledge::Free || k == Knowledge::Task) return true;
    }
    return false;
}

}  // namespace

TEST_CASE("observing a free centre creates four frontiers", "[board]") {
    OnlineBoard b(3, 3);
    std::vector<Observation> obs{free_at(1, 1)};
    CHECK(b.ingest_observations(obs, 1).empty());
    CHECK(b.knowledge({1, 1}) == Knowledge::Free);
    CHECK(b.frontier_jobs().size() == 4);
    for (CellPos p : {CellPos{1, 0}, CellPos{0, 1}, CellPos{2, 1}, CellPos{1, 2}}) CHECK(b.is_frontier(p));
    CHECK(b.dump() == "?F?\nF.F\n?F?\n");
}

TEST_CASE("re-observing only refreshes the timestamp", "[board]") {
    OnlineBoard b(3, 3);
    std::vector<Observation> obs{free_at(1, 1)};
    b.ingest_observations(obs, 1);
    const std::string before = b.dump();
    b.ingest_observations(obs, 5);
    CHECK(b.dump() == before);
    CHECK(b.last_observed({1, 1}) == 5);
}

TEST_CASE("observing a task creates a task job and frontiers", "[board]") {
    OnlineBoard b(3, 3);
    std::vector<Observation> obs{{{1, 1}, CellKind::Task, 7}};
    auto fresh = b.ingest_observations(obs, 1);
    REQUIRE(fresh == std::vector<int>{7});
    CHECK(b.knowledge({1, 1}) == Knowledge::Task);
    CHECK(b.task_jobs().size() == 1);
    CHECK(b.task_id_at({1, 1}) == 7);
    CHECK(b.frontier_jobs().size() == 4);
    CHECK(b.ingest_observations(obs, 2).empty());
}

TEST_CASE("obstacles do not create frontiers", "[board]") {
    OnlineBoard b(3, 1);
    std::vector<Observation> obs{{{1, 0}, CellKind::Obstacle, -1}};
    b.ingest_observations(obs, 1);
    CHECK(b.frontier_jobs().empty());
}

TEST_CASE("decay boundary is inclusive at K", "[board]") {
    OnlineBoard b(1, 1, 10);
    std::vector<Observation> obs{free_at(0, 0)};
    b.ingest_observations(obs, 1);
    CHECK(b.decay_knowledge(10) == 0);
    CHECK(b.knowledge({0, 0}) == Knowledge::Free);
    CHECK(b.decay_knowledge(11) == 1);
    CHECK(b.knowledge({0, 0}) == Knowledge::Unknown);
}

TEST_CASE("disabled decay leaves the board alone", "[board]") {
    OnlineBoard b(3, 3, 0);
    std::vector<Observation> obs{free_at(1, 1)};
    b.ingest_observations(obs, 1);
    const std::string before = b.dump();
    CHECK(b.decay_knowledge(100000) == 0);
    CHECK(b.dump() == before);
}

TEST_CASE("a fully observed board decays to unknown", "[board]") {
    OnlineBoard b(20, 20, 50);
    std::vector<Observation> obs;
    for (int y = 0; y < 20; ++y)
        for (int x = 0; x < 20; ++x) obs.push_back(free_at(x, y));
    b.ingest_observations(obs, 3);
    CHECK(b.frontier_jobs().empty());
    b.decay_knowledge(52);
    CHECK(b.knowledge({0, 0}) == Knowledge::Free);
    CHECK(b.decay_knowledge(53) == 400);
    CHECK(b.frontier_jobs().empty());
    for (int y = 0; y < 20; ++y)
        for (int x = 0; x < 20; ++x) CHECK(b.knowledge({x, y}) == Knowledge::Unknown);
}

TEST_CASE("live detected tasks survive decay", "[board]") {
    OnlineBoard b(3, 1, 5);
    std::vector<Observation> obs{free_at(0, 0), {{1, 0}, CellKind::Task, 0}, free_at(2, 0)};
    b.ingest_observations(obs, 1);
    b.decay_knowledge(6);
    CHECK(b.knowledge({1, 0}) == Knowledge::Task);
    CHECK(b.knowledge({0, 0}) == Knowledge::Frontier);
    CHECK(b.task_jobs().size() == 1);
    b.complete_task(0, 7);
    CHECK(b.task_jobs().empty());
    CHECK(b.knowledge({1, 0}) == Knowledge::Free);
}

TEST_CASE("frontier set matches a full recomputation", "[board]") {
    Rng rng(77);
    for (int trial = 0; trial < 60; ++trial) {
        const int w = 5 + static_cast<int>(uniform_index(rng, 26));
        const int h = 5 + static_cast<int>(uniform_index(rng, 26));
        OnlineBoard b(w, h, 1 + static_cast<int>(uniform_index(rng, 8)));
        int next_task = 0;
        for (int iter = 1; iter <= 25; ++iter) {
            std::vector<Observation> obs;
            const int n = static_cast<int>(uniform_index(rng, 40));
            for (int i = 0; i < n; ++i) {
                CellPos p{static_cast<int>(uniform_index(rng, w)), static_cast<int>(uniform_index(rng, h))};
                auto roll = uniform_index(rng, 10);
                if (b.knowledge(p) == Knowledge::Task) continue;
                if (roll < 2) obs.push_back({p, CellKind::Obstacle, -1});
                else if (roll < 3) obs.push_back({p, CellKind::Task, next_task++});
                else obs.push_back({p, CellKind::Free, -1});
            }
            std::sort(obs.begin(), obs.end(), [](auto& a, auto& c) { return a.pos < c.pos; });
            obs.erase(std::unique(obs.begin(), obs.end(), [](auto& a, auto& c) { return a.pos == c.pos; }),
                      obs.end());
            b.ingest_observations(obs, iter);
            b.decay_knowledge(iter);
            for (int y = 0; y < h; ++y)
                for (int x = 0; x < w; ++x) {
                    CellPos p{x, y};
                    REQUIRE(b.is_frontier(p) == frontier_oracle(b, p));
                    REQUIRE((b.knowledge(p) == Knowledge::Frontier) == b.is_frontier(p));
                }
        }
    }
}

TEST_CASE("membership labels replace earlier ones", "[board]") {
    OnlineBoard b(3, 3);
    std::vector<Observation> obs{free_at(1, 1)};
    b.ingest_observations(obs, 1);
    JobKey key{JobKind::Frontier, b.index({1, 0})};

    std::vector<MembershipLabel> cpm{{key, MarginBand::Cpm}};
    b.update_margin_membership(0, JobKind::Frontier, cpm);
    CHECK(b.find(key)->cf() == 1);
    CHECK(b.find(key)->uf() == 0);

    std::vector<MembershipLabel> upm{{key, MarginBand::Upm}};
    b.update_margin_membership(0, JobKind::Frontier, upm);
    CHECK(b.find(key)->cf() == 0);
    CHECK(b.find(key)->uf() == 1);

    b.update_margin_membership(1, JobKind::Frontier, cpm);
    b.update_margin_membership(2, JobKind::Frontier, cpm);
    CHECK(b.find(key)->cf() == 2);
    CHECK(b.find(key)->uf() == 1);

    b.update_margin_membership(0, JobKind::Frontier, {});
    CHECK(b.find(key)->uf() == 0);
}

TEST_CASE("claim lifecycle", "[board]") {
    OnlineBoard b(3, 3);
    std::vector<Observation> obs{free_at(1, 1)};
    b.ingest_observations(obs, 1);
    JobKey key{JobKind::Frontier, b.index({1, 0})};

    CHECK(b.try_claim(1, key, MarginBand::Upm) == ClaimOutcome::Pending);
    CHECK(b.find(key)->status == JobStatus::Pending);
    CHECK(b.try_claim(3, key, MarginBand::Upm) == ClaimOutcome::Refused);
    CHECK(b.try_claim(2, key, MarginBand::Cpm) == ClaimOutcome::Claimed);
    CHECK(b.find(key)->holder == 2);
    CHECK(b.try_claim(1, key, MarginBand::Cpm) == ClaimOutcome::Refused);
    CHECK(b.try_claim(1, key, MarginBand::Upm) == ClaimOutcome::Refused);

    b.release(2, key);
    CHECK(b.find(key)->status == JobStatus::Available);
    CHECK(b.try_claim(1, key, MarginBand::Cpm) == ClaimOutcome::Claimed);

    JobKey gone{JobKind::Frontier, b.index({0, 0})};
    CHECK_THROWS_AS(b.try_claim(1, gone, MarginBand::Cpm), StaleJob);
}

TEST_CASE("a resolved frontier drops its record", "[board]") {
    OnlineBoard b(3, 1);
    std::vector<Observation> first{free_at(0, 0)};
    b.ingest_observations(first, 1);
    JobKey key{JobKind::Frontier, b.index({1, 0})};
    REQUIRE(b.find(key));
    std::vector<Observation> second{free_at(1, 0)};
    b.ingest_observations(second, 2);
    CHECK_FALSE(b.find(key));
    CHECK(b.is_frontier({2, 0}));
}
