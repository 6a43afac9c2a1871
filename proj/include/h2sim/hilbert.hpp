#pragma once

// Composite photon x electron x nucleus basis of the hydrogen association
// model and reachable-state enumeration.

#include <algorithm>
#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <json.hpp>

namespace h2sim {

class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Photon modes in canonical order.
enum class Mode : std::uint8_t {
    omega_up = 0,   ///< molecular, spin up
    omega_down,     ///< molecular, spin down
    Omega_up,       ///< atomic, spin up
    Omega_down,     ///< atomic, spin down
    Omega_s,        ///< electron spin-flip photon
    Omega_n,        ///< nuclear spin-flip photon
};

inline constexpr std::size_t kModeCount = 6;
inline constexpr std::size_t kSlotCount = 8;

inline constexpr std::array<Mode, kModeCount> kAllModes = {
    Mode::omega_up, Mode::omega_down, Mode::Omega_up,
    Mode::Omega_down, Mode::Omega_s, Mode::Omega_n};

constexpr std::size_t index(Mode m) { return static_cast<std::size_t>(m); }

inline std::string_view mode_name(Mode m) {
    switch (m) {
    case Mode::omega_up: return "omega_up";
    case Mode::omega_down: return "omega_down";
    case Mode::Omega_up: return "Omega_up";
    case Mode::Omega_down: return "Omega_down";
    case Mode::Omega_s: return "Omega_s";
    case Mode::Omega_n: return "Omega_n";
    }
    return "?";
}

inline Mode mode_from_name(std::string_view name) {
    for (Mode m : kAllModes)
        if (mode_name(m) == name) return m;
    throw ValidationError("unknown mode label '" + std::string(name) + "'");
}

enum class Spin : std::uint8_t { up = 0, down = 1 };
enum class Orbital : std::uint8_t { excited = 0, ground = 1 };
enum class Atom : std::uint8_t { first = 0, second = 1 };

inline constexpr std::array<Atom, 2> kAtoms = {Atom::first, Atom::second};
inline constexpr std::array<Spin, 2> kSpins = {Spin::up, Spin::down};

/// Electron register slot for (atom, orbital, spin):
/// at1/or0/up, at1/or0/dn, at1/or-1/up, at1/or-1/dn, then the same for atom 2.
constexpr std::size_t slot(Atom a, Orbital o, Spin s) {
    return 4 * static_cast<std::size_t>(a) + 2 * static_cast<std::size_t>(o) +
           static_cast<std::size_t>(s);
}

/// With the nuclei together (k = 0) the excited slots of atom 1 hold the
/// antibonding orbital Phi_1 and those of atom 2 the bonding orbital Phi_0.
constexpr std::size_t antibonding_slot(Spin s) { return slot(Atom::first, Orbital::excited, s); }
constexpr std::size_t bonding_slot(Spin s) { return slot(Atom::second, Orbital::excited, s); }

struct ModeSpec {
    Mode label = Mode::omega_up;
    double frequency = 1.0;  // rad/s
    double gamma_out = 0.0;  // 1/s
    double mu = 0.0;         // influx ratio gamma_in / gamma_out
    int cutoff = 0;          // max Fock occupancy

    double gamma_in() const { return mu * gamma_out; }

    void validate() const {
        const std::string name(mode_name(label));
        if (!(frequency > 0.0)) throw ValidationError("mode " + name + ": frequency must be > 0");
        if (!(gamma_out >= 0.0)) throw ValidationError("mode " + name + ": gamma_out must be >= 0");
        if (!(mu >= 0.0 && mu < 1.0)) throw ValidationError("mode " + name + ": mu must lie in [0, 1)");
        if (cutoff < 0 || cutoff > 255) throw ValidationError("mode " + name + ": cutoff must lie in [0, 255]");
    }
};

using ModeTable = std::array<ModeSpec, kModeCount>;
using Cutoffs = std::array<int, kModeCount>;

inline Cutoffs cutoffs_of(const ModeTable& modes) {
    Cutoffs c{};
    for (std::size_t m = 0; m < kModeCount; ++m) c[m] = modes[m].cutoff;
    return c;
}

/// One composite configuration. Field order is the canonical (lexicographic)
/// order used for enumeration.
struct BasisState {
    std::array<std::uint8_t, kModeCount> photons{};
    std::array<std::uint8_t, kSlotCount> electrons{};
    std::uint8_t nuclei_apart = 1;  ///< k: 1 = separate cavities, 0 = together
    std::uint8_t spin1 = 1;         ///< k1: 1 = up, 0 = down
    std::uint8_t spin2 = 1;         ///< k2

    auto operator<=>(const BasisState&) const = default;

    int photon(Mode m) const { return photons[index(m)]; }
    bool occupied(std::size_t s) const { return electrons[s] != 0; }
    std::uint8_t nuclear_spin(Atom a) const { return a == Atom::first ? spin1 : spin2; }
    std::uint8_t& nuclear_spin(Atom a) { return a == Atom::first ? spin1 : spin2; }

    int electron_count() const {
        int n = 0;
        for (auto e : electrons) n += e;
        return n;
    }

    bool within(const Cutoffs& cut) const {
        for (std::size_t m = 0; m < kModeCount; ++m)
            if (photons[m] > cut[m]) return false;
        return true;
    }

    /// Packs the state into an integer whose ordering matches operator<=>.
    std::uint64_t encode() const {
        std::uint64_t key = 0;
        for (auto p : photons) key = (key << 8) | p;
        for (auto e : electrons) key = (key << 1) | (e & 1u);
        key = (key << 1) | (nuclei_apart & 1u);
        key = (key << 1) | (spin1 & 1u);
        key = (key << 1) | (spin2 & 1u);
        return key;
    }

    static BasisState decode(std::uint64_t key) {
        BasisState s;
        s.spin2 = key & 1u; key >>= 1;
        s.spin1 = key & 1u; key >>= 1;
        s.nuclei_apart = key & 1u; key >>= 1;
        for (std::size_t i = kSlotCount; i-- > 0;) { s.electrons[i] = key & 1u; key >>= 1; }
        for (std::size_t i = kModeCount; i-- > 0;) { s.photons[i] = key & 0xffu; key >>= 8; }
        return s;
    }
};

inline void to_json(nlohmann::json& j, const BasisState& s) {
    std::vector<int> ph(s.photons.begin(), s.photons.end());
    std::vector<int> el(s.electrons.begin(), s.electrons.end());
    j = nlohmann::json{{"photons", ph}, {"electrons", el},
                       {"k", s.nuclei_apart}, {"k1", s.spin1}, {"k2", s.spin2}};
}

inline void from_json(const nlohmann::json& j, BasisState& s) {
    auto ph = j.at("photons").get<std::vector<int>>();
    auto el = j.at("electrons").get<std::vector<int>>();
    if (ph.size() != kModeCount) throw ValidationError("state: photons needs 6 entries");
    if (el.size() != kSlotCount) throw ValidationError("state: electrons needs 8 entries");
    for (std::size_t m = 0; m < kModeCount; ++m) {
        if (ph[m] < 0 || ph[m] > 255) throw ValidationError("state: photon count out of range");
        s.photons[m] = static_cast<std::uint8_t>(ph[m]);
    }
    for (std::size_t i = 0; i < kSlotCount; ++i) {
        if (el[i] != 0 && el[i] != 1) throw ValidationError("state: electron bits must be 0/1");
        s.electrons[i] = static_cast<std::uint8_t>(el[i]);
    }
    auto bit = [&](const char* key) {
        int v = j.at(key).get<int>();
        if (v != 0 && v != 1) throw ValidationError(std::string("state: ") + key + " must be 0/1");
        return static_cast<std::uint8_t>(v);
    };
    s.nuclei_apart = bit("k");
    s.spin1 = bit("k1");
    s.spin2 = bit("k2");
}

/// Appends every state directly reachable from `from` under one rule.
using Generator = std::function<void(const BasisState& from, std::vector<BasisState>& out)>;

/// Immutable enumerated basis. Order is lexicographic in BasisState fields.
class Basis {
public:
    Basis(std::vector<BasisState> states, ModeTable modes) : states_(std::move(states)), modes_(modes) {
        std::sort(states_.begin(), states_.end());
        states_.erase(std::unique(states_.begin(), states_.end()), states_.end());
        index_.reserve(states_.size());
        std::uint64_t h = 1469598103934665603ull;
        auto mix = [&h](std::uint64_t v) {
            for (int b = 0; b < 8; ++b) {
                h ^= (v >> (8 * b)) & 0xffu;
                h *= 1099511628211ull;
            }
        };
        for (std::size_t i = 0; i < states_.size(); ++i) {
            const auto key = states_[i].encode();
            index_.emplace(key, i);
            mix(key);
        }
        for (const auto& m : modes_) mix(static_cast<std::uint64_t>(m.cutoff));
        id_ = h;
    }

    std::size_t size() const { return states_.size(); }
    const BasisState& operator[](std::size_t i) const { return states_[i]; }
    const std::vector<BasisState>& states() const { return states_; }
    const ModeTable& modes() const { return modes_; }
    const ModeSpec& mode(Mode m) const { return modes_[index(m)]; }
    Cutoffs cutoffs() const { return cutoffs_of(modes_); }
    /// Content hash; two bases with identical states and cutoffs share it.
    std::uint64_t id() const { return id_; }

    std::optional<std::size_t> index_of(const BasisState& s) const {
        auto it = index_.find(s.encode());
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    nlohmann::json to_json() const {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& s : states_) arr.push_back(s);
        return arr;
    }

private:
    std::vector<BasisState> states_;
    ModeTable modes_;
    std::unordered_map<std::uint64_t, std::size_t> index_;
    std::uint64_t id_ = 0;
};

inline std::optional<std::size_t> index_of(const Basis& b, const BasisState& s) { return b.index_of(s); }

/// Smallest cutoff-respecting set containing `initial` and closed under the
/// generators. Generated states beyond the cutoffs are discarded.
inline Basis enumerate_reachable(const BasisState& initial, const std::vector<Generator>& generators,
                                 const ModeTable& modes) {
    for (const auto& m : modes) m.validate();
    const Cutoffs cut = cutoffs_of(modes);
    if (!initial.within(cut)) throw ValidationError("initial state violates the Fock cutoffs");

    std::unordered_set<std::uint64_t> seen{initial.encode()};
    std::vector<BasisState> found{initial};
    std::deque<BasisState> frontier{initial};
    std::vector<BasisState> next;
    while (!frontier.empty()) {
        const BasisState s = frontier.front();
        frontier.pop_front();
        for (const auto& g : generators) {
            next.clear();
            g(s, next);
            for (const auto& t : next) {
                if (!t.within(cut)) continue;
                if (seen.insert(t.encode()).second) {
                    found.push_back(t);
                    frontier.push_back(t);
                }
            }
        }
    }
    return Basis(std::move(found), modes);
}

}  // namespace h2sim
