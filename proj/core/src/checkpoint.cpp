#include "burgers/checkpoint.hpp"

#include "burgers/config.hpp"
#include "burgers/snapshot.hpp"

#include <fstream>
#include <stdexcept>

namespace burgers {
namespace {

std::filesystem::path with_suffix(std::filesystem::path base, const char* ext) {
    base += ext;
    return base;
}

}  // namespace

void save_checkpoint(const std::filesystem::path& base, const TrajectoryConfig& cfg, const TrajectoryState& state) {
    write_snapshot(with_suffix(base, ".brg"), state.u, state.t);
    const Json meta{
        {"config", trajectory_to_json(cfg)},
        {"t", state.t},
        {"step_index", state.step_index},
        {"kick_index", state.kick_index},
        {"budget",
         {{"dissipated", state.budget.dissipated},
          {"injected", state.budget.injected},
          {"injected_expected", state.budget.injected_expected}}},
    };
    std::ofstream out(with_suffix(base, ".json"));
    if (!out) throw std::runtime_error("cannot write checkpoint metadata for " + base.string());
    out << meta.dump(2) << '\n';
}

Checkpoint load_checkpoint(const std::filesystem::path& base) {
    std::ifstream in(with_suffix(base, ".json"));
    if (!in) throw std::runtime_error("cannot read checkpoint metadata for " + base.string());
    const Json meta = Json::parse(in);
    const Snapshot snap = read_snapshot(with_suffix(base, ".brg"));

    TrajectoryConfig cfg = trajectory_from_json(meta.at("config"));
    if (!(snap.grid() == cfg.grid)) throw std::runtime_error("checkpoint grid does not match its config");
    Checkpoint c{cfg, TrajectoryState{snap.time, snap.field()}};
    if (snap.time != meta.at("t").get<double>()) throw std::runtime_error("checkpoint time mismatch");
    c.state.step_index = meta.at("step_index").get<std::uint64_t>();
    c.state.kick_index = meta.at("kick_index").get<std::uint64_t>();
    const Json& b = meta.at("budget");
    c.state.budget = {b.at("dissipated").get<double>(), b.at("injected").get<double>(),
                      b.at("injected_expected").get<double>()};
    c.state.tail_fraction = spectral_tail_fraction(c.state.u);
    return c;
}

}  // namespace burgers
