#pragma once

#include <array>
#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace maturity {

enum class LifecycleStage : std::uint8_t { PlanningAndDesign = 0, BuildingAndData = 1, Deployment = 2 };

inline constexpr std::array<LifecycleStage, 3> kAllStages = {
    LifecycleStage::PlanningAndDesign, LifecycleStage::BuildingAndData, LifecycleStage::Deployment};

enum class Pillar : std::uint8_t { Map = 0, Measure = 1, Manage = 2, Govern = 3 };

// Fixed axis order for every pillar chart.
inline constexpr std::array<Pillar, 4> kAllPillars = {Pillar::Map, Pillar::Measure, Pillar::Manage,
                                                      Pillar::Govern};

enum class Dimension : std::uint8_t {
  PerformanceValidity = 0,
  FairnessBias,
  Privacy,
  Environmental,
  TransparencyAccountability,
  SecurityResilience,
  Explainability,
  ThirdParty,
  Other,
};

inline constexpr std::array<Dimension, 9> kAllDimensions = {
    Dimension::PerformanceValidity, Dimension::FairnessBias,
    Dimension::Privacy,             Dimension::Environmental,
    Dimension::TransparencyAccountability, Dimension::SecurityResilience,
    Dimension::Explainability,      Dimension::ThirdParty,
    Dimension::Other};

std::string_view to_string(LifecycleStage stage) noexcept;
std::string_view to_string(Pillar pillar) noexcept;
std::string_view to_string(Dimension dimension) noexcept;

// Accept canonical names; stages also accept plan/build/deploy.
std::optional<LifecycleStage> parse_stage(std::string_view text) noexcept;
std::optional<Pillar> parse_pillar(std::string_view text) noexcept;
std::optional<Dimension> parse_dimension(std::string_view text) noexcept;

// A reference to an RMF subcategory such as MEASURE 2.11, or a marker for a
// statement that has no RMF counterpart.
struct RmfRef {
  std::optional<Pillar> pillar;
  int category = 0;
  int subcategory = 0;

  bool custom() const noexcept { return !pillar.has_value(); }

  static RmfRef make(Pillar p, int category, int subcategory) { return {p, category, subcategory}; }
  static RmfRef make_custom() { return {}; }

  std::string label() const;  // "MEASURE 2.11" or "custom"

  friend bool operator==(const RmfRef&, const RmfRef&) = default;
};

struct Statement {
  std::string id;  // topic number + letter, e.g. "4e"
  int topic_id = 0;
  std::string text;
  std::string emphasis;
  std::vector<RmfRef> rmf_refs;
  std::vector<Dimension> dimensions;  // named tags only; empty means Other
  LifecycleStage stage = LifecycleStage::PlanningAndDesign;

  bool has_pillar(Pillar p) const noexcept;
  bool has_dimension(Dimension d) const noexcept;
  bool custom_only() const noexcept;

  friend bool operator==(const Statement&, const Statement&) = default;
};

struct Topic {
  int id = 0;
  std::string name;
  std::string summary;
  LifecycleStage stage = LifecycleStage::PlanningAndDesign;
  std::vector<Statement> statements;

  // Union of the pillars referenced by the topic's sub-statements.
  std::vector<Pillar> pillars() const;

  friend bool operator==(const Topic&, const Topic&) = default;
};

inline constexpr int kTopicCount = 9;
inline constexpr int kStatementCount = 59;
inline constexpr std::array<int, kTopicCount> kStatementsPerTopic = {7, 3, 4, 13, 4, 4, 14, 1, 9};

// The validated, immutable instrument. Construct only through
// load_questionnaire; every accessor is const.
class Questionnaire {
 public:
  const std::string& version() const noexcept { return version_; }
  const std::vector<std::string>& notes() const noexcept { return notes_; }
  const std::vector<Topic>& topics() const noexcept { return topics_; }

  std::size_t statement_count() const noexcept;

  const Topic* find_topic(int id) const noexcept;
  const Statement* find_statement(std::string_view id) const noexcept;

  std::vector<const Statement*> all_statements() const;

  friend bool operator==(const Questionnaire&, const Questionnaire&) = default;

 private:
  friend Questionnaire load_questionnaire(std::istream& source);
  friend Questionnaire load_questionnaire_text(std::string_view text);

  std::string version_;
  std::vector<std::string> notes_;
  std::vector<Topic> topics_;
};

// Throws Error{ParseError} for malformed input and Error{IntegrityError}
// naming the violated invariant otherwise.
Questionnaire load_questionnaire(std::istream& source);
Questionnaire load_questionnaire_text(std::string_view text);
Questionnaire load_questionnaire_file(const std::string& path);

// The data file shipped with the repository, compiled into the library.
std::string_view bundled_questionnaire_text() noexcept;
const Questionnaire& bundled_questionnaire();

// Inverse of load_questionnaire; output uses the data file schema.
std::string serialize_questionnaire(const Questionnaire& q);

// Topics whose stage is at or before `stage`, in topic order.
std::vector<const Topic*> applicable_topics(const Questionnaire& q, LifecycleStage stage);

// Statements with at least one non-custom reference into `pillar`.
std::vector<const Statement*> statements_for_pillar(const Questionnaire& q, Pillar pillar);

// Statements tagged with `dimension`. Other is the set of untagged statements.
std::vector<const Statement*> statements_for_dimension(const Questionnaire& q, Dimension dimension);

}  // namespace maturity
