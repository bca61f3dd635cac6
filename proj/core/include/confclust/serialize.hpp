#pragma once

#include <filesystem>

#include <nlohmann/json.hpp>

#include "confclust/geometry.hpp"
#include "confclust/pipeline.hpp"
#include "confclust/selection.hpp"

// JSON documents for every artifact. Matrices are arrays of rows; non-finite
// reals are written as the strings "inf", "-inf" and "nan".
namespace confclust {

using nlohmann::json;

json real_to_json(double x);
double real_from_json(const json& j);

void to_json(json& j, const Box& b);
void from_json(const json& j, Box& b);
void to_json(json& j, const SphereModel& m);
void from_json(const json& j, SphereModel& m);
void to_json(json& j, const GeneralModel& m);
void from_json(const json& j, GeneralModel& m);
void to_json(json& j, const LevelSetModel& m);
void from_json(const json& j, LevelSetModel& m);
void to_json(json& j, const Residual& r);
void from_json(const json& j, Residual& r);
void to_json(json& j, const PredictionSet& s);
void from_json(const json& j, PredictionSet& s);
void to_json(json& j, const VolumeEstimate& v);
void from_json(const json& j, VolumeEstimate& v);
void to_json(json& j, const Clustering& c);
void from_json(const json& j, Clustering& c);
void to_json(json& j, const VolumeCurve& c);
void from_json(const json& j, VolumeCurve& c);
void to_json(json& j, const TestDecision& d);
void from_json(const json& j, TestDecision& d);

/// {"type": "sphere" | "general" | "levelset", ...model fields}
json model_to_json(const FittedModel& model);
FittedModel model_from_json(const json& j);

json read_json(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const json& j);

}  // namespace confclust
