#pragma once

#include <algorithm>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "gate/embedded.hpp"
#include "gate/errors.hpp"
#include "gate/text.hpp"

namespace gate {

using ordered_json = nlohmann::ordered_json;

enum class Suite { V1Taxonomy, Phase2Chain, Phase2Coordinator };

enum class CorpusCategory {
  DirectOverride,
  CodeExecution,
  DataExfiltration,
  Formatting,
  Obfuscation,
  ToolAgentManipulation,
  RolePlay,
  MultiTurnPersistence,
};

enum class FailureMode {
  DataLeak,
  Recon,
  Exfil,
  Override,
  Coercion,
  PolicyViolation,
  CodeExec,
  FormatViolation,
};

enum class EvalCategory {
  Delegate,
  RolePlay,
  ReconEnvironment,
  Directory,
  DataExfiltration,
  Obfuscation,
  Formatting,
  Override,
  ContextLeak,
  CTANavigation,
  Uncategorized,
};

enum class Platform { ChatGLM, Llama2 };

// ---------------------------------------------------------------------------
// Enum <-> token conversions (tokens are the wire/file representation)
// ---------------------------------------------------------------------------

inline std::string_view to_token(Suite s) {
  switch (s) {
    case Suite::V1Taxonomy: return "v1_taxonomy";
    case Suite::Phase2Chain: return "phase2_chain";
    case Suite::Phase2Coordinator: return "phase2_coordinator";
  }
  return "?";
}

inline std::string_view to_token(CorpusCategory c) {
  switch (c) {
    case CorpusCategory::DirectOverride: return "direct_override";
    case CorpusCategory::CodeExecution: return "code_execution";
    case CorpusCategory::DataExfiltration: return "data_exfiltration";
    case CorpusCategory::Formatting: return "formatting";
    case CorpusCategory::Obfuscation: return "obfuscation";
    case CorpusCategory::ToolAgentManipulation: return "tool_agent_manipulation";
    case CorpusCategory::RolePlay: return "role_play";
    case CorpusCategory::MultiTurnPersistence: return "multi_turn_persistence";
  }
  return "?";
}

inline std::string_view to_token(FailureMode m) {
  switch (m) {
    case FailureMode::DataLeak: return "data_leak";
    case FailureMode::Recon: return "recon";
    case FailureMode::Exfil: return "exfil";
    case FailureMode::Override: return "override";
    case FailureMode::Coercion: return "coercion";
    case FailureMode::PolicyViolation: return "policy_violation";
    case FailureMode::CodeExec: return "code_exec";
    case FailureMode::FormatViolation: return "format_violation";
  }
  return "?";
}

inline std::string_view to_token(EvalCategory c) {
  switch (c) {
    case EvalCategory::Delegate: return "delegate";
    case EvalCategory::RolePlay: return "role_play";
    case EvalCategory::ReconEnvironment: return "recon_environment";
    case EvalCategory::Directory: return "directory";
    case EvalCategory::DataExfiltration: return "data_exfiltration";
    case EvalCategory::Obfuscation: return "obfuscation";
    case EvalCategory::Formatting: return "formatting";
    case EvalCategory::Override: return "override";
    case EvalCategory::ContextLeak: return "context_leak";
    case EvalCategory::CTANavigation: return "cta_navigation";
    case EvalCategory::Uncategorized: return "uncategorized";
  }
  return "?";
}

inline std::string_view to_token(Platform p) {
  switch (p) {
    case Platform::ChatGLM: return "chatglm";
    case Platform::Llama2: return "llama2";
  }
  return "?";
}

inline constexpr EvalCategory kAllEvalCategories[] = {
    EvalCategory::Delegate,        EvalCategory::RolePlay,
    EvalCategory::ReconEnvironment, EvalCategory::Directory,
    EvalCategory::DataExfiltration, EvalCategory::Obfuscation,
    EvalCategory::Formatting,      EvalCategory::Override,
    EvalCategory::ContextLeak,     EvalCategory::CTANavigation,
    EvalCategory::Uncategorized,
};

template <typename Enum, std::size_t N>
std::optional<Enum> token_to_enum(std::string_view token, const Enum (&values)[N]) {
  for (Enum v : values)
    if (to_token(v) == token) return v;
  return std::nullopt;
}

inline std::optional<Suite> suite_from_token(std::string_view t) {
  static constexpr Suite v[] = {Suite::V1Taxonomy, Suite::Phase2Chain, Suite::Phase2Coordinator};
  return token_to_enum(t, v);
}

inline std::optional<CorpusCategory> corpus_category_from_token(std::string_view t) {
  static constexpr CorpusCategory v[] = {
      CorpusCategory::DirectOverride,  CorpusCategory::CodeExecution,
      CorpusCategory::DataExfiltration, CorpusCategory::Formatting,
      CorpusCategory::Obfuscation,     CorpusCategory::ToolAgentManipulation,
      CorpusCategory::RolePlay,        CorpusCategory::MultiTurnPersistence};
  return token_to_enum(t, v);
}

inline std::optional<FailureMode> failure_mode_from_token(std::string_view t) {
  static constexpr FailureMode v[] = {
      FailureMode::DataLeak, FailureMode::Recon,           FailureMode::Exfil,
      FailureMode::Override, FailureMode::Coercion,        FailureMode::PolicyViolation,
      FailureMode::CodeExec, FailureMode::FormatViolation};
  return token_to_enum(t, v);
}

inline std::optional<EvalCategory> eval_category_from_token(std::string_view t) {
  return token_to_enum(t, kAllEvalCategories);
}

inline std::optional<Platform> platform_from_token(std::string_view t) {
  static constexpr Platform v[] = {Platform::ChatGLM, Platform::Llama2};
  return token_to_enum(t, v);
}

// ---------------------------------------------------------------------------
// Domain types
// ---------------------------------------------------------------------------

struct VariantSpec {
  std::string variant_id;
  Platform platform = Platform::ChatGLM;
  std::optional<std::string> payload_override;
  bool baseline_complies = false;
};

struct AttackCase {
  std::string id;
  Suite suite = Suite::V1Taxonomy;
  CorpusCategory category = CorpusCategory::DirectOverride;
  EvalCategory eval_category = EvalCategory::Uncategorized;
  FailureMode failure_mode = FailureMode::Override;
  std::vector<std::string> turns;
  std::vector<VariantSpec> variants;
};

struct BenignCase {
  std::string id;
  std::string payload;
  // expected_behavior is always AnswerPassThrough in this corpus version.
};

struct Corpus {
  std::string version;
  std::vector<AttackCase> cases;
  std::vector<BenignCase> benign;

  const AttackCase* find_case(std::string_view id) const {
    for (const auto& c : cases)
      if (c.id == id) return &c;
    return nullptr;
  }
};

// One executable attack instance: a (case, variant) pair with overrides applied.
struct AttackInstance {
  std::string instance_id;  // "<case_id>#<variant_id>"
  std::string case_id;
  Suite suite = Suite::V1Taxonomy;
  CorpusCategory category = CorpusCategory::DirectOverride;
  EvalCategory eval_category = EvalCategory::Uncategorized;
  FailureMode failure_mode = FailureMode::Override;
  Platform platform = Platform::ChatGLM;
  bool baseline_complies = false;
  std::vector<std::string> turns;
};

// Total mapping from (corpus category, failure mode) pairs used by the dataset
// onto the ten-way reporting scheme (plus Uncategorized).
struct CategoryScheme {
  static std::optional<EvalCategory> map(CorpusCategory c, FailureMode m) {
    using C = CorpusCategory;
    using F = FailureMode;
    using E = EvalCategory;
    static const std::map<std::pair<C, F>, E> table = {
        {{C::ToolAgentManipulation, F::PolicyViolation}, E::Delegate},
        {{C::ToolAgentManipulation, F::CodeExec}, E::Directory},
        {{C::ToolAgentManipulation, F::Recon}, E::ReconEnvironment},
        {{C::ToolAgentManipulation, F::Exfil}, E::DataExfiltration},
        {{C::RolePlay, F::Override}, E::RolePlay},
        {{C::RolePlay, F::Coercion}, E::CTANavigation},
        {{C::CodeExecution, F::Recon}, E::ReconEnvironment},
        {{C::CodeExecution, F::DataLeak}, E::ReconEnvironment},
        {{C::CodeExecution, F::CodeExec}, E::Directory},
        {{C::DataExfiltration, F::Exfil}, E::DataExfiltration},
        {{C::DataExfiltration, F::Recon}, E::ReconEnvironment},
        {{C::DataExfiltration, F::DataLeak}, E::ContextLeak},
        {{C::Obfuscation, F::CodeExec}, E::Obfuscation},
        {{C::Obfuscation, F::Override}, E::Override},
        {{C::DirectOverride, F::Override}, E::Override},
        {{C::DirectOverride, F::DataLeak}, E::ContextLeak},
        {{C::DirectOverride, F::Coercion}, E::CTANavigation},
        {{C::Formatting, F::FormatViolation}, E::Formatting},
        {{C::MultiTurnPersistence, F::Override}, E::Override},
        {{C::MultiTurnPersistence, F::Coercion}, E::Uncategorized},
    };
    auto it = table.find({c, m});
    if (it == table.end()) return std::nullopt;
    return it->second;
  }
};

// ---------------------------------------------------------------------------
// Dataset contract: the exact composition the shipped corpus must satisfy.
// ---------------------------------------------------------------------------

namespace corpus_contract {

inline const std::map<Suite, int> kSuiteCases = {
    {Suite::V1Taxonomy, 25}, {Suite::Phase2Chain, 15}, {Suite::Phase2Coordinator, 15}};

inline const std::map<CorpusCategory, int> kCategoryCases = {
    {CorpusCategory::DirectOverride, 12},       {CorpusCategory::CodeExecution, 8},
    {CorpusCategory::DataExfiltration, 7},      {CorpusCategory::Formatting, 6},
    {CorpusCategory::Obfuscation, 8},           {CorpusCategory::ToolAgentManipulation, 5},
    {CorpusCategory::RolePlay, 6},              {CorpusCategory::MultiTurnPersistence, 3}};

inline const std::map<Suite, int> kSuiteInstances = {
    {Suite::V1Taxonomy, 100}, {Suite::Phase2Chain, 50}, {Suite::Phase2Coordinator, 50}};

inline const std::map<Suite, int> kSuiteBaselineSuccesses = {
    {Suite::V1Taxonomy, 30}, {Suite::Phase2Chain, 15}, {Suite::Phase2Coordinator, 10}};

// Per single expansion (one guard state). The reported category table counts
// both guard states, i.e. twice these numbers.
inline const std::map<EvalCategory, int> kEvalInstances = {
    {EvalCategory::Delegate, 5},         {EvalCategory::RolePlay, 15},
    {EvalCategory::ReconEnvironment, 25}, {EvalCategory::Directory, 20},
    {EvalCategory::DataExfiltration, 10}, {EvalCategory::Obfuscation, 15},
    {EvalCategory::Formatting, 25},      {EvalCategory::Override, 30},
    {EvalCategory::ContextLeak, 15},     {EvalCategory::CTANavigation, 30},
    {EvalCategory::Uncategorized, 10}};

inline const std::map<EvalCategory, int> kEvalBaselineSuccesses = {
    {EvalCategory::Delegate, 5},         {EvalCategory::RolePlay, 10},
    {EvalCategory::ReconEnvironment, 15}, {EvalCategory::Directory, 10},
    {EvalCategory::DataExfiltration, 5},  {EvalCategory::Obfuscation, 5},
    {EvalCategory::Formatting, 5},       {EvalCategory::Override, 0},
    {EvalCategory::ContextLeak, 0},      {EvalCategory::CTANavigation, 0},
    {EvalCategory::Uncategorized, 0}};

inline constexpr int kMinBenignCases = 50;

}  // namespace corpus_contract

// ---------------------------------------------------------------------------
// Parsing / serialization
// ---------------------------------------------------------------------------

namespace detail {

inline void require_keys(const ordered_json& obj, const std::vector<std::string>& required,
                         const std::vector<std::string>& optional, const std::string& where) {
  if (!obj.is_object()) throw SchemaError(where + ": expected an object");
  for (const auto& k : required)
    if (!obj.contains(k)) throw SchemaError(where + ": missing field '" + k + "'");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    const std::string& k = it.key();
    if (std::find(required.begin(), required.end(), k) == required.end() &&
        std::find(optional.begin(), optional.end(), k) == optional.end())
      throw SchemaError(where + ": unknown field '" + k + "'");
  }
}

inline std::string get_string(const ordered_json& obj, const std::string& key,
                              const std::string& where) {
  if (!obj.at(key).is_string()) throw SchemaError(where + ": field '" + key + "' must be a string");
  return obj.at(key).get<std::string>();
}

}  // namespace detail

inline Corpus parse_corpus_json(const ordered_json& doc) {
  detail::require_keys(doc, {"version", "cases", "benign"}, {}, "corpus");
  Corpus corpus;
  corpus.version = detail::get_string(doc, "version", "corpus");
  if (!doc.at("cases").is_array()) throw SchemaError("corpus: 'cases' must be an array");
  if (!doc.at("benign").is_array()) throw SchemaError("corpus: 'benign' must be an array");

  for (const auto& jc : doc.at("cases")) {
    detail::require_keys(jc,
                         {"id", "suite", "category", "eval_category", "failure_mode", "turns",
                          "variants"},
                         {}, "case");
    AttackCase c;
    c.id = detail::get_string(jc, "id", "case");
    const std::string where = "case " + c.id;
    auto suite = suite_from_token(detail::get_string(jc, "suite", where));
    if (!suite) throw SchemaError(where + ": bad suite");
    c.suite = *suite;
    auto cat = corpus_category_from_token(detail::get_string(jc, "category", where));
    if (!cat) throw SchemaError(where + ": bad category");
    c.category = *cat;
    auto ecat = eval_category_from_token(detail::get_string(jc, "eval_category", where));
    if (!ecat) throw SchemaError(where + ": bad eval_category");
    c.eval_category = *ecat;
    auto fm = failure_mode_from_token(detail::get_string(jc, "failure_mode", where));
    if (!fm) throw SchemaError(where + ": bad failure_mode");
    c.failure_mode = *fm;
    if (!jc.at("turns").is_array() || jc.at("turns").empty())
      throw SchemaError(where + ": 'turns' must be a nonempty array");
    for (const auto& t : jc.at("turns")) {
      if (!t.is_string()) throw SchemaError(where + ": turn must be a string");
      c.turns.push_back(t.get<std::string>());
    }
    if (!jc.at("variants").is_array() || jc.at("variants").empty())
      throw SchemaError(where + ": 'variants' must be a nonempty array");
    for (const auto& jv : jc.at("variants")) {
      detail::require_keys(jv, {"variant_id", "platform", "baseline_complies"},
                           {"payload_override"}, where + " variant");
      VariantSpec v;
      v.variant_id = detail::get_string(jv, "variant_id", where);
      auto plat = platform_from_token(detail::get_string(jv, "platform", where));
      if (!plat) throw SchemaError(where + ": bad platform in variant " + v.variant_id);
      v.platform = *plat;
      if (jv.contains("payload_override"))
        v.payload_override = detail::get_string(jv, "payload_override", where);
      if (!jv.at("baseline_complies").is_boolean())
        throw SchemaError(where + ": baseline_complies must be a boolean");
      v.baseline_complies = jv.at("baseline_complies").get<bool>();
      c.variants.push_back(std::move(v));
    }
    corpus.cases.push_back(std::move(c));
  }

  for (const auto& jb : doc.at("benign")) {
    detail::require_keys(jb, {"id", "payload", "expected_behavior"}, {}, "benign case");
    BenignCase b;
    b.id = detail::get_string(jb, "id", "benign case");
    b.payload = detail::get_string(jb, "payload", "benign " + b.id);
    if (detail::get_string(jb, "expected_behavior", "benign " + b.id) != "answer_pass_through")
      throw SchemaError("benign " + b.id + ": unknown expected_behavior");
    corpus.benign.push_back(std::move(b));
  }
  return corpus;
}

inline void validate_corpus(const Corpus& corpus) {
  namespace cc = corpus_contract;
  if (corpus.version != "1") throw SchemaError("corpus: unsupported version '" + corpus.version + "'");

  std::set<std::string> ids;
  std::map<Suite, int> suite_cases;
  std::map<CorpusCategory, int> category_cases;
  std::map<Suite, int> suite_instances;
  std::map<Suite, int> suite_successes;
  std::map<EvalCategory, int> eval_instances;
  std::map<EvalCategory, int> eval_successes;

  for (const auto& c : corpus.cases) {
    if (!ids.insert(c.id).second) throw InvariantError("duplicate case id: " + c.id);
    suite_cases[c.suite]++;
    category_cases[c.category]++;

    if (c.category == CorpusCategory::MultiTurnPersistence) {
      if (c.turns.size() < 2)
        throw InvariantError("case " + c.id + ": multi-turn persistence needs >= 2 turns");
    } else if (c.turns.size() != 1) {
      throw InvariantError("case " + c.id + ": single-turn category must have exactly 1 turn");
    }

    auto mapped = CategoryScheme::map(c.category, c.failure_mode);
    if (!mapped)
      throw InvariantError("case " + c.id + ": no category mapping for (" +
                           std::string(to_token(c.category)) + ", " +
                           std::string(to_token(c.failure_mode)) + ")");
    if (*mapped != c.eval_category)
      throw InvariantError("case " + c.id + ": eval_category disagrees with the category scheme");

    std::set<std::string> vids;
    bool has_chatglm = false, has_llama2 = false;
    for (const auto& v : c.variants) {
      if (!vids.insert(v.variant_id).second)
        throw InvariantError("case " + c.id + ": duplicate variant id " + v.variant_id);
      has_chatglm |= v.platform == Platform::ChatGLM;
      has_llama2 |= v.platform == Platform::Llama2;
      suite_instances[c.suite]++;
      eval_instances[c.eval_category]++;
      if (v.baseline_complies) {
        suite_successes[c.suite]++;
        eval_successes[c.eval_category]++;
      }
    }
    if (!has_chatglm || !has_llama2)
      throw InvariantError("case " + c.id + ": needs at least one variant per platform");
  }

  for (const auto& [suite, want] : cc::kSuiteCases)
    if (suite_cases[suite] != want)
      throw InvariantError("suite " + std::string(to_token(suite)) + ": expected " +
                           std::to_string(want) + " cases, found " +
                           std::to_string(suite_cases[suite]));
  for (const auto& [cat, want] : cc::kCategoryCases)
    if (category_cases[cat] != want)
      throw InvariantError("category " + std::string(to_token(cat)) + ": expected " +
                           std::to_string(want) + " cases, found " +
                           std::to_string(category_cases[cat]));
  for (const auto& [suite, want] : cc::kSuiteInstances)
    if (suite_instances[suite] != want)
      throw InvariantError("suite " + std::string(to_token(suite)) + ": expected " +
                           std::to_string(want) + " instances, found " +
                           std::to_string(suite_instances[suite]));
  for (const auto& [suite, want] : cc::kSuiteBaselineSuccesses)
    if (suite_successes[suite] != want)
      throw InvariantError("suite " + std::string(to_token(suite)) +
                           ": expected baseline success count " + std::to_string(want) +
                           ", found " + std::to_string(suite_successes[suite]));
  for (const auto& [ecat, want] : cc::kEvalInstances)
    if (eval_instances[ecat] != want)
      throw InvariantError("eval category " + std::string(to_token(ecat)) + ": expected " +
                           std::to_string(want) + " instances, found " +
                           std::to_string(eval_instances[ecat]));
  for (const auto& [ecat, want] : cc::kEvalBaselineSuccesses)
    if (eval_successes[ecat] != want)
      throw InvariantError("eval category " + std::string(to_token(ecat)) +
                           ": expected baseline success count " + std::to_string(want) +
                           ", found " + std::to_string(eval_successes[ecat]));

  if (static_cast<int>(corpus.benign.size()) < cc::kMinBenignCases)
    throw InvariantError("benign suite: expected >= " + std::to_string(cc::kMinBenignCases) +
                         " cases, found " + std::to_string(corpus.benign.size()));
  std::set<std::string> bids;
  for (const auto& b : corpus.benign)
    if (!bids.insert(b.id).second) throw InvariantError("duplicate benign id: " + b.id);
}

inline Corpus parse_corpus(std::string_view text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError(std::string("corpus: invalid JSON: ") + e.what());
  }
  Corpus corpus = parse_corpus_json(doc);
  validate_corpus(corpus);
  return corpus;
}

inline Corpus load_corpus(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read corpus file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_corpus(ss.str());
}

inline std::string serialize_corpus(const Corpus& corpus) {
  ordered_json doc;
  doc["version"] = corpus.version;
  doc["cases"] = ordered_json::array();
  for (const auto& c : corpus.cases) {
    ordered_json jc;
    jc["id"] = c.id;
    jc["suite"] = to_token(c.suite);
    jc["category"] = to_token(c.category);
    jc["eval_category"] = to_token(c.eval_category);
    jc["failure_mode"] = to_token(c.failure_mode);
    jc["turns"] = c.turns;
    jc["variants"] = ordered_json::array();
    for (const auto& v : c.variants) {
      ordered_json jv;
      jv["variant_id"] = v.variant_id;
      jv["platform"] = to_token(v.platform);
      if (v.payload_override) jv["payload_override"] = *v.payload_override;
      jv["baseline_complies"] = v.baseline_complies;
      jc["variants"].push_back(std::move(jv));
    }
    doc["cases"].push_back(std::move(jc));
  }
  doc["benign"] = ordered_json::array();
  for (const auto& b : corpus.benign) {
    ordered_json jb;
    jb["id"] = b.id;
    jb["payload"] = b.payload;
    jb["expected_behavior"] = "answer_pass_through";
    doc["benign"].push_back(std::move(jb));
  }
  return doc.dump(2);
}

inline std::string corpus_hash(const Corpus& corpus) {
  return to_hex64(fnv1a64(serialize_corpus(corpus)));
}

// Deterministic expansion: sorted by case id, then variant id. A variant's
// payload_override replaces the final turn of the case payload.
inline std::vector<AttackInstance> expand_instances(const Corpus& corpus,
                                                    std::optional<Suite> suite_filter = {}) {
  std::vector<const AttackCase*> ordered;
  for (const auto& c : corpus.cases) {
    if (suite_filter && c.suite != *suite_filter) continue;
    ordered.push_back(&c);
  }
  std::sort(ordered.begin(), ordered.end(),
            [](const AttackCase* a, const AttackCase* b) { return a->id < b->id; });

  std::vector<AttackInstance> out;
  for (const AttackCase* c : ordered) {
    std::vector<const VariantSpec*> variants;
    for (const auto& v : c->variants) variants.push_back(&v);
    std::sort(variants.begin(), variants.end(), [](const VariantSpec* a, const VariantSpec* b) {
      return a->variant_id < b->variant_id;
    });
    for (const VariantSpec* v : variants) {
      AttackInstance inst;
      inst.instance_id = c->id + "#" + v->variant_id;
      inst.case_id = c->id;
      inst.suite = c->suite;
      inst.category = c->category;
      inst.eval_category = c->eval_category;
      inst.failure_mode = c->failure_mode;
      inst.platform = v->platform;
      inst.baseline_complies = v->baseline_complies;
      inst.turns = c->turns;
      if (v->payload_override) inst.turns.back() = *v->payload_override;
      out.push_back(std::move(inst));
    }
  }
  return out;
}

inline const Corpus& builtin_corpus() {
  static const Corpus corpus = parse_corpus(embedded::corpus_json());
  return corpus;
}

// The companion benign suite as a corpus view (attack cases omitted).
inline Corpus builtin_benign() {
  Corpus benign;
  benign.version = builtin_corpus().version;
  benign.benign = builtin_corpus().benign;
  return benign;
}

}  // namespace gate
