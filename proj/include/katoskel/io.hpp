// JSON input and output: stratified models, simplicial complexes with named
// group actions, divisors, cones, and homology reports. Rationals are
// serialized as "p/q" strings; serialization is canonical (fixed key order,
// two-space indent, trailing newline) so parse and serialize round-trip
// byte-exactly.
#pragma once

#include <json.hpp>

#include "katoskel/topology.hpp"
#include "katoskel/weight.hpp"

namespace katoskel {

using Json = nlohmann::ordered_json;

class IOError : public std::runtime_error {
  public:
    IOError(std::string code, const std::string& what)
        : std::runtime_error(code + ": " + what), code_(std::move(code)) {}
    const std::string& code() const { return code_; }

  private:
    std::string code_;
};

Rat rat_from_string(const std::string& s);
std::string rat_to_string(const Rat& r);

Json load_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);
std::string dump_canonical(const Json& j);

// "model-v1", "complex-v1", "divisor-v1" or "cone-v1"; SchemaError otherwise.
std::string schema_of(const Json& j);

StratifiedModel model_from_json(const Json& j);
Json model_to_json(const StratifiedModel& m);

// A simplicial complex bundled with named action generator lists.
struct ComplexFile {
    SimplicialComplex complex;
    std::map<std::string, std::vector<std::vector<size_t>>> actions;
};
ComplexFile complex_from_json(const Json& j);
Json complex_to_json(const ComplexFile& c);

LogDivisor divisor_from_json(const Json& j);
Json divisor_to_json(const LogDivisor& d);

// A single realized cone, loaded through fan_of_cone.
struct ConeFile {
    size_t dim = 0;
    IMat rays;
    IVec pi_dual;
};
ConeFile cone_from_json(const Json& j);
Json cone_to_json(const ConeFile& c);

Json homology_to_json(const HomologyResult& h);

// Schema and invariant diagnostics; empty means valid. When a model is given
// alongside a divisor, the divisor keys are checked against the fan points.
std::vector<std::string> validate_document(const Json& j,
                                           const StratifiedModel* context);

}  // namespace katoskel
