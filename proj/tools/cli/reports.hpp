#pragma once

#include "cpcross/correspondence.hpp"
#include "cpcross/corpus.hpp"
#include "cpcross/exel.hpp"
#include "cpcross/io.hpp"
#include "cpcross/rep.hpp"

namespace cpcross::cli {

Json paths_json(const Graph& g, const std::vector<Path>& ps);
Json weights_json(const Graph& g, const WeightSystem& w);

Json to_json(const ConditionReport& r);
Json to_json(const Graph& g, const TransferIdentityReport& r);
Json to_json(const Graph& g, const SystemClassification& c);
Json to_json(const Graph& g, const IdealReport& r);
Json to_json(const CovarianceSpanReport& r);
Json to_json(const Graph& g, const TruncatedDomain& d);

Json to_json(const MatrixRep& rep);
Json to_json(const UOperator& u, bool with_matrix);
Json to_json(const RepresentationReport& r);
Json residual_json(long double r);

Json to_json(const Subalgebra& b);
Json to_json(const GnsKernel& k);
Json to_json(const MultiplicativeDomain& md);
Json to_json(const FaithfulnessReport& f);
Json to_json(const SupportRelation& r);
Json to_json(const Quiver& q);
Json to_json(const QuiverDimensionReport& r);
Json to_json(const ConditionalExpectationReport& r);
Json to_json(const Correspondence& x);
Json to_json(const CompactFrame& f);
Json to_json(const Endomorphism& a);
Json to_json(const RegularEnumeration& e);
Json to_json(const TransferPairReport& r);
Json to_json(const ModuleIsoReport& r);

// Human-readable rendering of a report: one "key: value" line per scalar leaf.
std::string render_table(const Json& report);

}  // namespace cpcross::cli
