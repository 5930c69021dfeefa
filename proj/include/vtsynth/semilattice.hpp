#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "vtsynth/bdd.hpp"
#include "vtsynth/formula.hpp"

namespace vtsynth {

using json = nlohmann::ordered_json;

/// Handle to an element of a VerdictDomain. Handles are interned per domain
/// instance: two handles from the same domain are equal iff they denote the
/// same element, so `id` doubles as the canonical form for hashing.
struct Verdict {
    std::uint32_t id = 0;
    friend auto operator<=>(const Verdict&, const Verdict&) = default;
};

class DomainError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Join-semilattice of verdicts ordered by specificity (smaller = more specific).
///
/// `meet` returns nullopt where the greatest lower bound does not exist in the
/// domain itself; the sentinel bottom never leaves this interface.
///
/// Domains intern elements lazily, so `join`/`meet`/`parse` mutate internal
/// tables. A domain instance must be confined to one thread while it is being
/// extended; read-only queries on existing handles may run concurrently.
class VerdictDomain {
public:
    virtual ~VerdictDomain() = default;

    virtual std::string kind() const = 0;
    virtual bool leq(Verdict a, Verdict b) const = 0;
    virtual Verdict join(Verdict a, Verdict b) = 0;
    virtual std::optional<Verdict> meet(Verdict a, Verdict b) = 0;
    virtual std::optional<Verdict> top() = 0;

    /// Canonical text; equal iff the verdicts are equal.
    virtual std::string to_string(Verdict v) const = 0;
    /// Accepts the canonical text (and domain-specific shorthands).
    virtual Verdict parse(std::string_view text) = 0;

    /// Enough metadata to rebuild an equivalent domain with `make_domain`.
    virtual json metadata() const = 0;
};

using DomainPtr = std::shared_ptr<VerdictDomain>;

/// Rebuilds a domain from `VerdictDomain::metadata()` output.
DomainPtr make_domain(const json& metadata);

Verdict join_all(std::span<const Verdict> vs, VerdictDomain& d);
std::optional<Verdict> meet_all(std::span<const Verdict> vs, VerdictDomain& d);

/// Splits "{a, {b, c}, d}" into its top-level members. Throws DomainError on
/// unbalanced braces or a missing outer pair.
std::vector<std::string> split_braced_list(std::string_view text);

// ---------------------------------------------------------------------------
// Truth domains
// ---------------------------------------------------------------------------

/// {t, ?, f} (three values) or {t, tp, ?, fp, f} (five values), with
/// t ⊑ tp ⊑ ? and f ⊑ fp ⊑ ?.
class TruthDomain final : public VerdictDomain {
public:
    enum Value : std::uint32_t { kTrue = 0, kFalse = 1, kUnknown = 2, kPossiblyTrue = 3, kPossiblyFalse = 4 };

    explicit TruthDomain(bool five_valued) : five_(five_valued) {}

    static Verdict of(Value v) { return Verdict{v}; }
    bool five_valued() const { return five_; }

    std::string kind() const override { return five_ ? "truth5" : "truth3"; }
    bool leq(Verdict a, Verdict b) const override;
    Verdict join(Verdict a, Verdict b) override;
    std::optional<Verdict> meet(Verdict a, Verdict b) override;
    std::optional<Verdict> top() override { return of(kUnknown); }
    std::string to_string(Verdict v) const override;
    Verdict parse(std::string_view text) override;
    json metadata() const override { return json{{"kind", kind()}}; }

private:
    bool five_;
};

// ---------------------------------------------------------------------------
// Diagnosis domain ⟨P(F), ⊇⟩
// ---------------------------------------------------------------------------

/// Sets of fault classes ordered by reverse inclusion: join is intersection,
/// meet is union, the empty set is top. At most 64 classes.
class DiagnosisDomain final : public VerdictDomain {
public:
    explicit DiagnosisDomain(std::vector<std::string> classes);

    const std::vector<std::string>& classes() const { return classes_; }
    std::optional<std::size_t> class_index(std::string_view name) const;

    Verdict of_mask(std::uint64_t mask);
    std::uint64_t mask(Verdict v) const { return masks_.at(v.id); }

    std::string kind() const override { return "diagnosis"; }
    bool leq(Verdict a, Verdict b) const override;
    Verdict join(Verdict a, Verdict b) override;
    std::optional<Verdict> meet(Verdict a, Verdict b) override;
    std::optional<Verdict> top() override { return of_mask(0); }
    std::string to_string(Verdict v) const override;
    Verdict parse(std::string_view text) override;
    json metadata() const override;

private:
    std::vector<std::string> classes_;
    std::vector<std::uint64_t> masks_;
    std::unordered_map<std::uint64_t, std::uint32_t> index_;
};

// ---------------------------------------------------------------------------
// Boolean expressions over basic events, ordered by implication
// ---------------------------------------------------------------------------

/// Elements are boolean functions over `events` (compared by their sets of
/// satisfying assignments). Join is disjunction, meet conjunction; "false" is
/// a legal (bottom) element.
class BoolExprDomain final : public VerdictDomain {
public:
    explicit BoolExprDomain(std::vector<std::string> events);

    const std::vector<std::string>& events() const { return events_; }
    Verdict of_formula(const Formula& f);
    /// Truth value of `v` under an assignment to the events (index order).
    bool satisfied_by(Verdict v, const std::vector<bool>& assignment) const;

    std::string kind() const override { return "boolexpr"; }
    bool leq(Verdict a, Verdict b) const override;
    Verdict join(Verdict a, Verdict b) override;
    std::optional<Verdict> meet(Verdict a, Verdict b) override;
    std::optional<Verdict> top() override { return Verdict{Bdd::kTrue}; }
    std::string to_string(Verdict v) const override;
    Verdict parse(std::string_view text) override;
    json metadata() const override;

private:
    std::vector<std::string> events_;
    mutable Bdd bdd_;
};

// ---------------------------------------------------------------------------
// Possibility lifting ⟨P(V), ⊆⟩
// ---------------------------------------------------------------------------

/// Finite sets of verdicts of an inner domain ordered by inclusion. The inner
/// structure plays no role in the order. No top element is materialized.
class LiftedDomain final : public VerdictDomain {
public:
    explicit LiftedDomain(DomainPtr inner);

    const DomainPtr& inner() const { return inner_; }
    Verdict singleton(Verdict inner);
    Verdict of_set(std::vector<Verdict> members);
    const std::vector<Verdict>& members(Verdict v) const { return sets_.at(v.id); }

    std::string kind() const override { return "lifted"; }
    bool leq(Verdict a, Verdict b) const override;
    Verdict join(Verdict a, Verdict b) override;
    std::optional<Verdict> meet(Verdict a, Verdict b) override;
    std::optional<Verdict> top() override { return std::nullopt; }
    std::string to_string(Verdict v) const override;
    Verdict parse(std::string_view text) override;
    json metadata() const override;

private:
    struct VecHash {
        std::size_t operator()(const std::vector<Verdict>& v) const noexcept;
    };
    DomainPtr inner_;
    std::vector<std::vector<Verdict>> sets_;
    std::unordered_map<std::vector<Verdict>, std::uint32_t, VecHash> index_;
};

// ---------------------------------------------------------------------------
// Configuration domain ⟨P(Conf) \ {∅}, ⊆⟩
// ---------------------------------------------------------------------------

/// A configuration: one flag per feature, in declaration order.
using Configuration = std::vector<bool>;

/// Features plus the constraint selecting valid configurations: either a
/// formula or an explicit list (exactly one of the two is set).
struct FeatureModel {
    std::vector<std::string> features;
    std::optional<Formula> validity;
    std::optional<std::vector<Configuration>> valid_configurations;

    std::optional<std::size_t> feature_index(std::string_view name) const;
    /// "s+e" style name; "-" for the empty configuration.
    std::string config_name(const Configuration& c) const;
    Configuration parse_config_name(std::string_view name) const;
    /// Effective validity as a formula (explicit lists become a disjunction of cubes).
    Formula validity_formula() const;
    json to_json() const;
    static FeatureModel from_json(const json& j);
};

enum class ConfigBackend { kExplicit, kSymbolic };

/// Non-empty sets of valid configurations. Two interchangeable backends share
/// the canonical order of configurations: lexicographic over feature flags,
/// first feature most significant, absent before present. Sets up to
/// `kListLimit` valid configurations in the universe print as explicit lists;
/// larger universes print as "bdd: <dnf>".
class ConfigDomain : public VerdictDomain {
public:
    static constexpr std::uint64_t kListLimit = 65536;

    const FeatureModel& feature_model() const { return model_; }
    virtual ConfigBackend backend() const = 0;

    /// nullopt iff the formula has no valid model.
    virtual std::optional<Verdict> from_formula(const Formula& f) = 0;
    /// nullopt iff the list is empty; throws for invalid configurations.
    virtual std::optional<Verdict> from_configs(std::span<const Configuration> configs) = 0;
    virtual Verdict universe() = 0;

    virtual std::uint64_t count(Verdict v) const = 0;
    virtual std::uint64_t universe_size() const = 0;
    virtual bool contains(Verdict v, const Configuration& c) const = 0;
    virtual bool is_valid(const Configuration& c) const = 0;
    /// Valid configuration with the given canonical rank. Thread-safe.
    virtual Configuration unrank(std::uint64_t rank) const = 0;
    /// Members in canonical order, at most `limit`.
    virtual std::vector<Configuration> members(Verdict v, std::size_t limit) const = 0;

    std::string kind() const override { return "config"; }
    std::optional<Verdict> top() override { return universe(); }
    std::string to_string(Verdict v) const override;
    Verdict parse(std::string_view text) override;
    json metadata() const override;

protected:
    explicit ConfigDomain(FeatureModel model) : model_(std::move(model)) {}
    virtual std::string symbolic_text(Verdict v) const = 0;

    FeatureModel model_;
};

/// Bitsets over the enumerated universe. Requires |Conf| ≤ kListLimit and, for
/// formula validity, at most 24 features.
class ExplicitConfigDomain final : public ConfigDomain {
public:
    explicit ExplicitConfigDomain(FeatureModel model);

    ConfigBackend backend() const override { return ConfigBackend::kExplicit; }
    std::optional<Verdict> from_formula(const Formula& f) override;
    std::optional<Verdict> from_configs(std::span<const Configuration> configs) override;
    Verdict universe() override;
    std::uint64_t count(Verdict v) const override;
    std::uint64_t universe_size() const override { return universe_.size(); }
    bool contains(Verdict v, const Configuration& c) const override;
    bool is_valid(const Configuration& c) const override { return rank_of(c).has_value(); }
    Configuration unrank(std::uint64_t rank) const override { return universe_.at(rank); }
    std::vector<Configuration> members(Verdict v, std::size_t limit) const override;

    bool leq(Verdict a, Verdict b) const override;
    Verdict join(Verdict a, Verdict b) override;
    std::optional<Verdict> meet(Verdict a, Verdict b) override;

private:
    using Bits = std::vector<std::uint64_t>;
    struct BitsHash {
        std::size_t operator()(const Bits& b) const noexcept;
    };
    std::optional<std::size_t> rank_of(const Configuration& c) const;
    std::optional<Verdict> intern(Bits bits);
    std::string symbolic_text(Verdict) const override { return {}; }

    std::vector<Configuration> universe_;
    std::map<Configuration, std::size_t> rank_;
    std::vector<Bits> sets_;
    std::unordered_map<Bits, std::uint32_t, BitsHash> index_;
};

/// ROBDDs over the features, always conjoined with the validity constraint.
/// Verdict ids are BDD node handles.
class SymbolicConfigDomain final : public ConfigDomain {
public:
    explicit SymbolicConfigDomain(FeatureModel model);

    ConfigBackend backend() const override { return ConfigBackend::kSymbolic; }
    std::optional<Verdict> from_formula(const Formula& f) override;
    std::optional<Verdict> from_configs(std::span<const Configuration> configs) override;
    Verdict universe() override { return Verdict{valid_}; }
    std::uint64_t count(Verdict v) const override;
    std::uint64_t universe_size() const override { return universe_size_; }
    bool contains(Verdict v, const Configuration& c) const override;
    bool is_valid(const Configuration& c) const override { return bdd_.eval(valid_, c); }
    Configuration unrank(std::uint64_t rank) const override;
    std::vector<Configuration> members(Verdict v, std::size_t limit) const override;

    bool leq(Verdict a, Verdict b) const override;
    Verdict join(Verdict a, Verdict b) override;
    std::optional<Verdict> meet(Verdict a, Verdict b) override;

    Bdd& bdd() { return bdd_; }

private:
    std::string symbolic_text(Verdict v) const override;

    mutable Bdd bdd_;
    Bdd::Node valid_ = Bdd::kFalse;
    std::uint64_t universe_size_ = 0;
};

/// Explicit backend when the universe is small enough to enumerate
/// (≤ 20 features or an explicit list, and |Conf| ≤ kListLimit); symbolic otherwise.
std::shared_ptr<ConfigDomain> make_config_domain(FeatureModel model, std::optional<ConfigBackend> backend = {});

}  // namespace vtsynth

template <>
struct std::hash<vtsynth::Verdict> {
    std::size_t operator()(const vtsynth::Verdict& v) const noexcept { return std::hash<std::uint32_t>{}(v.id); }
};
