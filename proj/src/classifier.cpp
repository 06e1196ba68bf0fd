#include "xwalk/classifier.hpp"

#include <fstream>
#include <sstream>

#include "xwalk/error.hpp"

namespace xwalk {

ReplayManifest ReplayManifest::parse(std::string_view text) {
  ReplayManifest m;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string id;
    std::string cls;
    std::string extra;
    if (!(fields >> id)) continue;
    if (!(fields >> cls) || (fields >> extra)) {
      throw ValidationError("manifest line " + std::to_string(line_no) +
                            ": expected '<frame-id> <class>'");
    }
    auto label = parse_frame_class(cls);
    if (!label) {
      throw ValidationError("manifest line " + std::to_string(line_no) + ": unknown class '" +
                            cls + "'");
    }
    if (!m.index_.emplace(id, m.records_.size()).second) {
      throw ValidationError("manifest line " + std::to_string(line_no) + ": duplicate frame id '" +
                            id + "'");
    }
    m.records_.push_back({id, *label});
  }
  return m;
}

ReplayManifest ReplayManifest::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open manifest: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

std::optional<FrameClass> ReplayManifest::find(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return records_[it->second].label;
}

ReplayBackend::ReplayBackend(ReplayManifest manifest) : manifest_(std::move(manifest)) {}

Observation ReplayBackend::classify(const Frame& frame) {
  auto label = manifest_.find(frame.id);
  if (!label) throw ClassificationError("frame '" + frame.id + "' not in replay manifest");
  return Observation{0.0, *label, std::nullopt};
}

Observation ReplayBackend::classify_next() {
  if (cursor_ >= manifest_.size()) throw EndOfStream();
  return Observation{0.0, manifest_.records()[cursor_++].label, std::nullopt};
}

ConfusionBackend::ConfusionBackend(ConfusionModel model, std::uint64_t seed)
    : model_(model), rng_(seed) {}

Observation ConfusionBackend::classify(const Frame& frame) {
  if (!frame.truth) {
    throw ClassificationError("confusion backend needs a true class for frame '" + frame.id + "'");
  }
  return Observation{0.0, model_.sample(*frame.truth, rng_), std::nullopt};
}

}  // namespace xwalk
