#include "vtsynth/semilattice.hpp"

#include <algorithm>
#include <bit>
#include <set>

namespace vtsynth {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::string join_strings(const std::vector<std::string>& parts, std::string_view sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

bool shortlex_less(const std::string& a, const std::string& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
}

}  // namespace

std::vector<std::string> split_braced_list(std::string_view text) {
    text = trim(text);
    if (text.size() < 2 || text.front() != '{' || text.back() != '}')
        throw DomainError("expected a braced list, got \"" + std::string(text) + "\"");
    std::string_view inner = text.substr(1, text.size() - 2);
    std::vector<std::string> out;
    int depth = 0;
    std::size_t start = 0;
    for (std::size_t i = 0; i < inner.size(); ++i) {
        char c = inner[i];
        if (c == '{') {
            ++depth;
        } else if (c == '}') {
            if (--depth < 0) throw DomainError("unbalanced braces in \"" + std::string(text) + "\"");
        } else if (c == ',' && depth == 0) {
            out.emplace_back(trim(inner.substr(start, i - start)));
            start = i + 1;
        }
    }
    if (depth != 0) throw DomainError("unbalanced braces in \"" + std::string(text) + "\"");
    std::string_view last = trim(inner.substr(start));
    if (!last.empty() || !out.empty()) out.emplace_back(last);
    for (const auto& item : out)
        if (item.empty()) throw DomainError("empty list element in \"" + std::string(text) + "\"");
    return out;
}

Verdict join_all(std::span<const Verdict> vs, VerdictDomain& d) {
    if (vs.empty()) throw DomainError("empty join");
    Verdict acc = vs.front();
    for (std::size_t i = 1; i < vs.size(); ++i) acc = d.join(acc, vs[i]);
    return acc;
}

std::optional<Verdict> meet_all(std::span<const Verdict> vs, VerdictDomain& d) {
    if (vs.empty()) throw DomainError("empty meet");
    std::optional<Verdict> acc = vs.front();
    for (std::size_t i = 1; i < vs.size() && acc; ++i) acc = d.meet(*acc, vs[i]);
    return acc;
}

// ---------------------------------------------------------------------------
// TruthDomain

bool TruthDomain::leq(Verdict a, Verdict b) const {
    if (a == b || b.id == kUnknown) return true;
    return (a.id == kTrue && b.id == kPossiblyTrue) || (a.id == kFalse && b.id == kPossiblyFalse);
}

Verdict TruthDomain::join(Verdict a, Verdict b) {
    if (leq(a, b)) return b;
    if (leq(b, a)) return a;
    return of(kUnknown);
}

std::optional<Verdict> TruthDomain::meet(Verdict a, Verdict b) {
    if (leq(a, b)) return a;
    if (leq(b, a)) return b;
    return std::nullopt;
}

std::string TruthDomain::to_string(Verdict v) const {
    switch (v.id) {
        case kTrue: return "t";
        case kFalse: return "f";
        case kUnknown: return "?";
        case kPossiblyTrue: return "tp";
        case kPossiblyFalse: return "fp";
        default: throw DomainError("invalid truth verdict id " + std::to_string(v.id));
    }
}

Verdict TruthDomain::parse(std::string_view text) {
    text = trim(text);
    if (text == "t" || text == "true") return of(kTrue);
    if (text == "f" || text == "false") return of(kFalse);
    if (text == "?") return of(kUnknown);
    if (five_ && text == "tp") return of(kPossiblyTrue);
    if (five_ && text == "fp") return of(kPossiblyFalse);
    throw DomainError("unknown " + kind() + " verdict \"" + std::string(text) + "\"");
}

// ---------------------------------------------------------------------------
// DiagnosisDomain

DiagnosisDomain::DiagnosisDomain(std::vector<std::string> classes) : classes_(std::move(classes)) {
    if (classes_.size() > 64) throw DomainError("at most 64 fault classes are supported");
    std::set<std::string> seen;
    for (const auto& c : classes_)
        if (!seen.insert(c).second) throw DomainError("duplicate fault class \"" + c + "\"");
}

std::optional<std::size_t> DiagnosisDomain::class_index(std::string_view name) const {
    auto it = std::find(classes_.begin(), classes_.end(), name);
    if (it == classes_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - classes_.begin());
}

Verdict DiagnosisDomain::of_mask(std::uint64_t mask) {
    if (auto it = index_.find(mask); it != index_.end()) return Verdict{it->second};
    auto id = static_cast<std::uint32_t>(masks_.size());
    masks_.push_back(mask);
    index_.emplace(mask, id);
    return Verdict{id};
}

bool DiagnosisDomain::leq(Verdict a, Verdict b) const { return (mask(b) & ~mask(a)) == 0; }

Verdict DiagnosisDomain::join(Verdict a, Verdict b) { return of_mask(mask(a) & mask(b)); }

std::optional<Verdict> DiagnosisDomain::meet(Verdict a, Verdict b) { return of_mask(mask(a) | mask(b)); }

std::string DiagnosisDomain::to_string(Verdict v) const {
    std::vector<std::string> names;
    std::uint64_t m = mask(v);
    for (std::size_t i = 0; i < classes_.size(); ++i)
        if (m >> i & 1U) names.push_back(classes_[i]);
    return "{" + join_strings(names, ", ") + "}";
}

Verdict DiagnosisDomain::parse(std::string_view text) {
    std::uint64_t m = 0;
    for (const auto& name : split_braced_list(text)) {
        auto idx = class_index(name);
        if (!idx) throw DomainError("unknown fault class \"" + name + "\"");
        m |= std::uint64_t{1} << *idx;
    }
    return of_mask(m);
}

json DiagnosisDomain::metadata() const { return json{{"kind", kind()}, {"classes", classes_}}; }

// ---------------------------------------------------------------------------
// BoolExprDomain

BoolExprDomain::BoolExprDomain(std::vector<std::string> events)
    : events_(std::move(events)), bdd_(static_cast<std::uint32_t>(events_.size())) {
    std::set<std::string> seen;
    for (const auto& e : events_)
        if (!seen.insert(e).second) throw DomainError("duplicate basic event \"" + e + "\"");
}

Verdict BoolExprDomain::of_formula(const Formula& f) {
    return Verdict{f.to_bdd(bdd_, [&](const std::string& name) {
        auto it = std::find(events_.begin(), events_.end(), name);
        if (it == events_.end()) throw DomainError("unknown basic event \"" + name + "\"");
        return static_cast<std::uint32_t>(it - events_.begin());
    })};
}

bool BoolExprDomain::satisfied_by(Verdict v, const std::vector<bool>& assignment) const {
    return bdd_.eval(v.id, assignment);
}

bool BoolExprDomain::leq(Verdict a, Verdict b) const { return bdd_.implies(a.id, b.id); }

Verdict BoolExprDomain::join(Verdict a, Verdict b) { return Verdict{bdd_.lor(a.id, b.id)}; }

std::optional<Verdict> BoolExprDomain::meet(Verdict a, Verdict b) { return Verdict{bdd_.land(a.id, b.id)}; }

std::string BoolExprDomain::to_string(Verdict v) const { return bdd_to_dnf(bdd_, v.id, events_); }

Verdict BoolExprDomain::parse(std::string_view text) {
    try {
        return of_formula(Formula::parse(text));
    } catch (const FormulaError& e) {
        throw DomainError(e.what());
    }
}

json BoolExprDomain::metadata() const { return json{{"kind", kind()}, {"events", events_}}; }

// ---------------------------------------------------------------------------
// LiftedDomain

std::size_t LiftedDomain::VecHash::operator()(const std::vector<Verdict>& v) const noexcept {
    std::uint64_t h = v.size();
    for (auto x : v) h = (h ^ x.id) * 0x100000001b3ULL;
    return static_cast<std::size_t>(h);
}

LiftedDomain::LiftedDomain(DomainPtr inner) : inner_(std::move(inner)) {
    if (!inner_) throw DomainError("lifted domain needs an inner domain");
}

Verdict LiftedDomain::of_set(std::vector<Verdict> members) {
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    if (auto it = index_.find(members); it != index_.end()) return Verdict{it->second};
    auto id = static_cast<std::uint32_t>(sets_.size());
    sets_.push_back(members);
    index_.emplace(std::move(members), id);
    return Verdict{id};
}

Verdict LiftedDomain::singleton(Verdict inner) { return of_set({inner}); }

bool LiftedDomain::leq(Verdict a, Verdict b) const {
    const auto& x = members(a);
    const auto& y = members(b);
    return std::includes(y.begin(), y.end(), x.begin(), x.end());
}

Verdict LiftedDomain::join(Verdict a, Verdict b) {
    std::vector<Verdict> out;
    const auto& x = members(a);
    const auto& y = members(b);
    std::set_union(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(out));
    return of_set(std::move(out));
}

std::optional<Verdict> LiftedDomain::meet(Verdict a, Verdict b) {
    std::vector<Verdict> out;
    const auto& x = members(a);
    const auto& y = members(b);
    std::set_intersection(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(out));
    return of_set(std::move(out));
}

std::string LiftedDomain::to_string(Verdict v) const {
    std::vector<std::string> parts;
    for (auto m : members(v)) parts.push_back(inner_->to_string(m));
    std::sort(parts.begin(), parts.end(), shortlex_less);
    return "{" + join_strings(parts, ", ") + "}";
}

Verdict LiftedDomain::parse(std::string_view text) {
    std::vector<Verdict> out;
    for (const auto& item : split_braced_list(text)) out.push_back(inner_->parse(item));
    return of_set(std::move(out));
}

json LiftedDomain::metadata() const { return json{{"kind", kind()}, {"inner", inner_->metadata()}}; }

// ---------------------------------------------------------------------------
// FeatureModel

std::optional<std::size_t> FeatureModel::feature_index(std::string_view name) const {
    auto it = std::find(features.begin(), features.end(), name);
    if (it == features.end()) return std::nullopt;
    return static_cast<std::size_t>(it - features.begin());
}

std::string FeatureModel::config_name(const Configuration& c) const {
    std::vector<std::string> on;
    for (std::size_t i = 0; i < features.size(); ++i)
        if (c[i]) on.push_back(features[i]);
    return on.empty() ? "-" : join_strings(on, "+");
}

Configuration FeatureModel::parse_config_name(std::string_view name) const {
    name = trim(name);
    Configuration c(features.size(), false);
    if (name == "-") return c;
    std::size_t start = 0;
    while (start <= name.size()) {
        std::size_t plus = name.find('+', start);
        if (plus == std::string_view::npos) plus = name.size();
        std::string_view part = trim(name.substr(start, plus - start));
        auto idx = feature_index(part);
        if (!idx) throw DomainError("unknown feature \"" + std::string(part) + "\" in configuration \"" +
                                    std::string(name) + "\"");
        c[*idx] = true;
        start = plus + 1;
    }
    return c;
}

Formula FeatureModel::validity_formula() const {
    if (validity) return *validity;
    if (!valid_configurations) return Formula::constant(true);
    if (valid_configurations->empty()) return Formula::constant(false);
    std::vector<std::string> cubes;
    for (const auto& c : *valid_configurations) {
        std::vector<std::string> lits;
        for (std::size_t i = 0; i < features.size(); ++i) lits.push_back((c[i] ? "" : "!") + features[i]);
        cubes.push_back(lits.empty() ? "true" : "(" + join_strings(lits, " & ") + ")");
    }
    return Formula::parse(join_strings(cubes, " | "));
}

json FeatureModel::to_json() const {
    json j;
    j["features"] = features;
    if (validity) j["validity"] = validity->to_string();
    if (valid_configurations) {
        json list = json::array();
        for (const auto& c : *valid_configurations) list.push_back(config_name(c));
        j["configurations"] = list;
    }
    return j;
}

FeatureModel FeatureModel::from_json(const json& j) {
    FeatureModel m;
    for (const auto& f : j.at("features")) m.features.push_back(f.get<std::string>());
    std::set<std::string> seen;
    for (const auto& f : m.features)
        if (!seen.insert(f).second) throw DomainError("duplicate feature \"" + f + "\"");
    if (j.contains("validity") && j.contains("configurations"))
        throw DomainError("give either a validity formula or a configuration list, not both");
    if (j.contains("configurations")) {
        std::vector<Configuration> list;
        for (const auto& c : j.at("configurations")) list.push_back(m.parse_config_name(c.get<std::string>()));
        m.valid_configurations = std::move(list);
    } else if (j.contains("validity")) {
        try {
            m.validity = Formula::parse(j.at("validity").get<std::string>());
        } catch (const FormulaError& e) {
            throw DomainError(e.what());
        }
    } else if (!m.features.empty()) {
        std::string any = join_strings(m.features, " | ");
        m.validity = Formula::parse(any);
    }
    if (m.validity) {
        for (const auto& v : m.validity->variables())
            if (!m.feature_index(v)) throw DomainError("unknown feature \"" + v + "\" in validity constraint");
    }
    return m;
}

// ---------------------------------------------------------------------------
// ConfigDomain

std::string ConfigDomain::to_string(Verdict v) const {
    if (universe_size() > kListLimit) return "bdd: " + symbolic_text(v);
    std::vector<std::string> names;
    for (const auto& c : members(v, kListLimit)) names.push_back(model_.config_name(c));
    return "{" + join_strings(names, ", ") + "}";
}

Verdict ConfigDomain::parse(std::string_view text) {
    text = trim(text);
    std::optional<Verdict> v;
    if (!text.empty() && text.front() == '{') {
        std::vector<Configuration> configs;
        for (const auto& name : split_braced_list(text)) configs.push_back(model_.parse_config_name(name));
        v = from_configs(configs);
    } else {
        std::string_view body = text;
        if (body.starts_with("bdd:")) body = trim(body.substr(4));
        try {
            v = from_formula(Formula::parse(body));
        } catch (const FormulaError& e) {
            throw DomainError(e.what());
        }
    }
    if (!v) throw DomainError("empty configuration set \"" + std::string(text) + "\"");
    return *v;
}

json ConfigDomain::metadata() const {
    json j{{"kind", kind()}};
    j["backend"] = backend() == ConfigBackend::kExplicit ? "explicit" : "symbolic";
    json fm = model_.to_json();
    for (auto& [k, val] : fm.items()) j[k] = val;
    return j;
}

namespace {
std::uint32_t feature_lookup(const FeatureModel& m, const std::string& name) {
    auto idx = m.feature_index(name);
    if (!idx) throw DomainError("unknown feature \"" + name + "\"");
    return static_cast<std::uint32_t>(*idx);
}
}  // namespace

// ---------------------------------------------------------------------------
// ExplicitConfigDomain

std::size_t ExplicitConfigDomain::BitsHash::operator()(const Bits& b) const noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (auto w : b) h = (h ^ w) * 0x100000001b3ULL;
    return static_cast<std::size_t>(h);
}

ExplicitConfigDomain::ExplicitConfigDomain(FeatureModel model) : ConfigDomain(std::move(model)) {
    const std::size_t n = model_.features.size();
    if (model_.valid_configurations) {
        std::set<Configuration> uniq;
        for (const auto& c : *model_.valid_configurations) {
            if (c.size() != n) throw DomainError("configuration width does not match the feature list");
            uniq.insert(c);
        }
        universe_.assign(uniq.begin(), uniq.end());
    } else {
        if (n > 24) throw DomainError("explicit configuration backend supports at most 24 features");
        Formula validity = model_.validity_formula();
        Configuration c(n, false);
        for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << n); ++bits) {
            for (std::size_t i = 0; i < n; ++i) c[i] = (bits >> (n - 1 - i)) & 1U;
            bool ok = validity.eval([&](const std::string& name) { return c[feature_lookup(model_, name)]; });
            if (ok) {
                universe_.push_back(c);
                if (universe_.size() > kListLimit)
                    throw DomainError("too many valid configurations for the explicit backend");
            }
        }
    }
    if (universe_.size() > kListLimit) throw DomainError("too many valid configurations for the explicit backend");
    if (universe_.empty()) throw DomainError("the feature model admits no valid configuration");
    for (std::size_t i = 0; i < universe_.size(); ++i) rank_.emplace(universe_[i], i);
}

std::optional<std::size_t> ExplicitConfigDomain::rank_of(const Configuration& c) const {
    auto it = rank_.find(c);
    if (it == rank_.end()) return std::nullopt;
    return it->second;
}

std::optional<Verdict> ExplicitConfigDomain::intern(Bits bits) {
    if (std::all_of(bits.begin(), bits.end(), [](std::uint64_t w) { return w == 0; })) return std::nullopt;
    if (auto it = index_.find(bits); it != index_.end()) return Verdict{it->second};
    auto id = static_cast<std::uint32_t>(sets_.size());
    sets_.push_back(bits);
    index_.emplace(std::move(bits), id);
    return Verdict{id};
}

std::optional<Verdict> ExplicitConfigDomain::from_formula(const Formula& f) {
    Bits bits((universe_.size() + 63) / 64, 0);
    for (std::size_t r = 0; r < universe_.size(); ++r) {
        const auto& c = universe_[r];
        if (f.eval([&](const std::string& name) { return c[feature_lookup(model_, name)]; }))
            bits[r / 64] |= std::uint64_t{1} << (r % 64);
    }
    return intern(std::move(bits));
}

std::optional<Verdict> ExplicitConfigDomain::from_configs(std::span<const Configuration> configs) {
    Bits bits((universe_.size() + 63) / 64, 0);
    for (const auto& c : configs) {
        auto r = rank_of(c);
        if (!r) throw DomainError("configuration \"" + model_.config_name(c) + "\" is not valid");
        bits[*r / 64] |= std::uint64_t{1} << (*r % 64);
    }
    return intern(std::move(bits));
}

Verdict ExplicitConfigDomain::universe() {
    Bits bits((universe_.size() + 63) / 64, ~std::uint64_t{0});
    if (universe_.size() % 64) bits.back() = (std::uint64_t{1} << (universe_.size() % 64)) - 1;
    return *intern(std::move(bits));
}

std::uint64_t ExplicitConfigDomain::count(Verdict v) const {
    std::uint64_t n = 0;
    for (auto w : sets_.at(v.id)) n += static_cast<std::uint64_t>(std::popcount(w));
    return n;
}

bool ExplicitConfigDomain::contains(Verdict v, const Configuration& c) const {
    auto r = rank_of(c);
    if (!r) return false;
    return (sets_.at(v.id)[*r / 64] >> (*r % 64)) & 1U;
}

std::vector<Configuration> ExplicitConfigDomain::members(Verdict v, std::size_t limit) const {
    std::vector<Configuration> out;
    const auto& bits = sets_.at(v.id);
    for (std::size_t r = 0; r < universe_.size() && out.size() < limit; ++r)
        if ((bits[r / 64] >> (r % 64)) & 1U) out.push_back(universe_[r]);
    return out;
}

bool ExplicitConfigDomain::leq(Verdict a, Verdict b) const {
    const auto& x = sets_.at(a.id);
    const auto& y = sets_.at(b.id);
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i] & ~y[i]) return false;
    return true;
}

Verdict ExplicitConfigDomain::join(Verdict a, Verdict b) {
    Bits out = sets_.at(a.id);
    const auto& y = sets_.at(b.id);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] |= y[i];
    return *intern(std::move(out));
}

std::optional<Verdict> ExplicitConfigDomain::meet(Verdict a, Verdict b) {
    Bits out = sets_.at(a.id);
    const auto& y = sets_.at(b.id);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] &= y[i];
    return intern(std::move(out));
}

// ---------------------------------------------------------------------------
// SymbolicConfigDomain

SymbolicConfigDomain::SymbolicConfigDomain(FeatureModel model)
    : ConfigDomain(std::move(model)), bdd_(static_cast<std::uint32_t>(model_.features.size())) {
    valid_ = model_.validity_formula().to_bdd(
        bdd_, [&](const std::string& name) { return feature_lookup(model_, name); });
    if (valid_ == Bdd::kFalse) throw DomainError("the feature model admits no valid configuration");
    // Also fills the count cache below the validity root, which is what makes
    // unrank safe to call from several threads afterwards.
    universe_size_ = bdd_.count(valid_);
}

std::optional<Verdict> SymbolicConfigDomain::from_formula(const Formula& f) {
    Bdd::Node n = f.to_bdd(bdd_, [&](const std::string& name) { return feature_lookup(model_, name); });
    n = bdd_.land(n, valid_);
    if (n == Bdd::kFalse) return std::nullopt;
    return Verdict{n};
}

std::optional<Verdict> SymbolicConfigDomain::from_configs(std::span<const Configuration> configs) {
    Bdd::Node acc = Bdd::kFalse;
    for (const auto& c : configs) {
        if (c.size() != model_.features.size() || !bdd_.eval(valid_, c))
            throw DomainError("configuration \"" + model_.config_name(c) + "\" is not valid");
        Bdd::Node cube = Bdd::kTrue;
        for (std::size_t i = c.size(); i-- > 0;) {
            auto var = static_cast<std::uint32_t>(i);
            cube = bdd_.land(c[i] ? bdd_.var(var) : bdd_.nvar(var), cube);
        }
        acc = bdd_.lor(acc, cube);
    }
    if (acc == Bdd::kFalse) return std::nullopt;
    return Verdict{acc};
}

std::uint64_t SymbolicConfigDomain::count(Verdict v) const { return bdd_.count(v.id); }

bool SymbolicConfigDomain::contains(Verdict v, const Configuration& c) const { return bdd_.eval(v.id, c); }

Configuration SymbolicConfigDomain::unrank(std::uint64_t rank) const { return bdd_.unrank(valid_, rank); }

std::vector<Configuration> SymbolicConfigDomain::members(Verdict v, std::size_t limit) const {
    return bdd_.enumerate(v.id, limit);
}

bool SymbolicConfigDomain::leq(Verdict a, Verdict b) const { return bdd_.implies(a.id, b.id); }

Verdict SymbolicConfigDomain::join(Verdict a, Verdict b) { return Verdict{bdd_.lor(a.id, b.id)}; }

std::optional<Verdict> SymbolicConfigDomain::meet(Verdict a, Verdict b) {
    Bdd::Node n = bdd_.land(a.id, b.id);
    if (n == Bdd::kFalse) return std::nullopt;
    return Verdict{n};
}

std::string SymbolicConfigDomain::symbolic_text(Verdict v) const { return bdd_to_dnf(bdd_, v.id, model_.features); }

// ---------------------------------------------------------------------------

std::shared_ptr<ConfigDomain> make_config_domain(FeatureModel model, std::optional<ConfigBackend> backend) {
    if (!backend) {
        bool small = model.valid_configurations ? model.valid_configurations->size() <= ConfigDomain::kListLimit
                                                : model.features.size() <= 20;
        backend = small ? ConfigBackend::kExplicit : ConfigBackend::kSymbolic;
    }
    if (*backend == ConfigBackend::kExplicit) return std::make_shared<ExplicitConfigDomain>(std::move(model));
    return std::make_shared<SymbolicConfigDomain>(std::move(model));
}

DomainPtr make_domain(const json& metadata) {
    const std::string kind = metadata.at("kind").get<std::string>();
    if (kind == "truth3") return std::make_shared<TruthDomain>(false);
    if (kind == "truth5") return std::make_shared<TruthDomain>(true);
    if (kind == "diagnosis")
        return std::make_shared<DiagnosisDomain>(metadata.at("classes").get<std::vector<std::string>>());
    if (kind == "boolexpr")
        return std::make_shared<BoolExprDomain>(metadata.at("events").get<std::vector<std::string>>());
    if (kind == "lifted") return std::make_shared<LiftedDomain>(make_domain(metadata.at("inner")));
    if (kind == "config") {
        std::optional<ConfigBackend> backend;
        if (metadata.contains("backend"))
            backend = metadata.at("backend") == "symbolic" ? ConfigBackend::kSymbolic : ConfigBackend::kExplicit;
        return make_config_domain(FeatureModel::from_json(metadata), backend);
    }
    throw DomainError("unknown verdict domain kind \"" + kind + "\"");
}

}  // namespace vtsynth
