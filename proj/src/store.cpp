#include <fstream>
#include <sstream>

#include <json.hpp>
#include <openssl/evp.h>

#include "depgen/error.hpp"
#include "depgen/model.hpp"

namespace depgen {

namespace {

using Json = nlohmann::json;  // sorted keys

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr);
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xF]);
  }
  return out;
}

Json label_to_json(const MeaningLabel& label) {
  return Json{{"field", label.field},
              {"occurrence", label.occurrence},
              {"type", label.record_type}};
}

MeaningLabel label_from_json(const Json& j) {
  MeaningLabel label;
  label.record_type = j.at("type").get<std::string>();
  label.field = j.at("field").get<std::string>();
  label.occurrence = j.at("occurrence").get<int>();
  return label;
}

Json sig_to_json(const NodeSignature& sig) {
  Json j;
  j["label"] = sig.label ? label_to_json(*sig.label) : Json(nullptr);
  j["pos"] = sig.pos;
  j["word"] = sig.word;
  return j;
}

NodeSignature sig_from_json(const Json& j) {
  NodeSignature sig;
  if (!j.at("label").is_null()) sig.label = label_from_json(j.at("label"));
  sig.pos = j.at("pos").get<std::string>();
  sig.word = j.at("word").get<std::string>();
  return sig;
}

Json entry_to_json(const FeatureEntry& entry) {
  Json j;
  j["parent"] = entry.feature.root_parent ? Json(nullptr)
                                          : sig_to_json(entry.feature.parent);
  j["deprel"] = entry.feature.deprel;
  j["node"] = sig_to_json(entry.feature.node);
  Json children = Json::array();
  for (const auto& child : entry.feature.children) {
    children.push_back(
        Json{{"deprel", child.deprel}, {"node", sig_to_json(child.node)}});
  }
  j["children"] = std::move(children);
  j["count"] = entry.count;
  Json slots = Json::array();
  for (const auto& [slot, count] : entry.slot_counts) {
    slots.push_back(Json::array({slot, count}));
  }
  j["slots"] = std::move(slots);
  return j;
}

FeatureEntry entry_from_json(const Json& j, const char* section) {
  FeatureEntry entry;
  if (!j.at("parent").is_null()) {
    entry.feature.parent = sig_from_json(j.at("parent"));
  } else {
    entry.feature.root_parent = true;
  }
  entry.feature.deprel = j.at("deprel").get<std::string>();
  entry.feature.node = sig_from_json(j.at("node"));
  for (const auto& child : j.at("children")) {
    entry.feature.children.push_back({sig_from_json(child.at("node")),
                                      child.at("deprel").get<std::string>()});
  }
  entry.count = j.at("count").get<long long>();
  if (entry.count < 1) {
    throw DepgenError(std::string("invalid count in model file (") + section +
                      ")");
  }
  long long slot_sum = 0;
  for (const auto& slot : j.at("slots")) {
    const int s = slot.at(0).get<int>();
    const long long c = slot.at(1).get<long long>();
    if (s < 0 || c < 1) {
      throw DepgenError(std::string("invalid slot count in model file (") +
                        section + ")");
    }
    entry.slot_counts[s] = c;
    slot_sum += c;
  }
  if (slot_sum != entry.count) {
    throw DepgenError(std::string("slot counts disagree with feature count (") +
                      section + ")");
  }
  return entry;
}

Json lm_token_pair(const LmToken& tok) {
  return Json::array({tok.text, tok.pos});
}

}  // namespace

void save_model(const TrainedModel& model, const std::string& path) {
  Json doc;
  doc["version"] = model.version;

  Json config;
  config["max_exhaustive"] = model.config.max_exhaustive;
  config["node_cap"] = model.config.node_cap;
  config["perm_cap"] = model.config.perm_cap;
  config["threshold"] = model.config.threshold;
  config["weight1"] = model.config.weight1;
  config["weight2"] = model.config.weight2;
  config["weight3"] = model.config.weight3;
  doc["config"] = std::move(config);

  Json labels;
  labels["sequences"] = model.label_model.sequence_count;
  Json unigram = Json::array();
  for (const auto& [key, count] : model.label_model.unigram) {
    unigram.push_back(Json::array({key, count}));
  }
  labels["unigram"] = std::move(unigram);
  Json bigram = Json::array();
  for (const auto& [from, row] : model.label_model.bigram) {
    for (const auto& [to, count] : row) {
      bigram.push_back(Json::array({from, to, count}));
    }
  }
  labels["bigram"] = std::move(bigram);
  doc["labels"] = std::move(labels);

  Json features = Json::array();
  for (const auto& [key, entry] : model.feature_model.features) {
    features.push_back(entry_to_json(entry));
  }
  doc["features"] = std::move(features);

  Json word_features = Json::array();
  for (const auto& [key, entry] : model.word_model.features) {
    word_features.push_back(entry_to_json(entry));
  }
  doc["word_features"] = std::move(word_features);

  Json trigram;
  Json uni = Json::array();
  for (const auto& [tok, count] : model.trigram.uni) {
    Json row = lm_token_pair(tok);
    row.push_back(count);
    uni.push_back(std::move(row));
  }
  trigram["uni"] = std::move(uni);
  Json bi = Json::array();
  for (const auto& [pair, count] : model.trigram.bi) {
    Json row = Json::array(
        {pair.first.text, pair.first.pos, pair.second.text, pair.second.pos});
    row.push_back(count);
    bi.push_back(std::move(row));
  }
  trigram["bi"] = std::move(bi);
  Json tri = Json::array();
  for (const auto& [triple, count] : model.trigram.tri) {
    const auto& [a, b, c] = triple;
    Json row = Json::array({a.text, a.pos, b.text, b.pos, c.text, c.pos});
    row.push_back(count);
    tri.push_back(std::move(row));
  }
  trigram["tri"] = std::move(tri);
  doc["trigram"] = std::move(trigram);

  std::string body = doc.dump() + "\n";
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DepgenError("cannot write model file: " + path);
  out << body << "#sha256:" << sha256_hex(body) << "\n";
}

TrainedModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DepgenError("cannot read model file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();

  const std::string marker = "#sha256:";
  const auto pos = text.rfind(marker);
  if (pos == std::string::npos) {
    throw DepgenError("model file truncated: missing checksum line");
  }
  const std::string body = text.substr(0, pos);
  std::string stated = text.substr(pos + marker.size());
  while (!stated.empty() && (stated.back() == '\n' || stated.back() == '\r')) {
    stated.pop_back();
  }
  if (stated != sha256_hex(body)) {
    throw DepgenError("model file checksum mismatch");
  }

  Json doc;
  try {
    doc = Json::parse(body);
  } catch (const Json::parse_error& e) {
    throw DepgenError(std::string("model file is not valid JSON: ") +
                      e.what());
  }

  TrainedModel model;
  model.version = doc.at("version").get<int>();
  if (model.version != kModelVersion) {
    throw DepgenError("unsupported model version");
  }

  const Json& config = doc.at("config");
  model.config.max_exhaustive = config.at("max_exhaustive").get<int>();
  model.config.node_cap = config.at("node_cap").get<int>();
  model.config.perm_cap = config.at("perm_cap").get<int>();
  model.config.threshold = config.at("threshold").get<double>();
  model.config.weight1 = config.at("weight1").get<double>();
  model.config.weight2 = config.at("weight2").get<double>();
  model.config.weight3 = config.at("weight3").get<double>();

  const Json& labels = doc.at("labels");
  model.label_model.sequence_count = labels.at("sequences").get<long long>();
  for (const auto& row : labels.at("unigram")) {
    const auto key = row.at(0).get<std::string>();
    const auto count = row.at(1).get<long long>();
    if (count < 1) throw DepgenError("invalid count in model file (labels)");
    model.label_model.unigram[key] = count;
    model.label_model.total_labels += count;
  }
  for (const auto& row : labels.at("bigram")) {
    const auto count = row.at(2).get<long long>();
    if (count < 1) throw DepgenError("invalid count in model file (labels)");
    model.label_model.bigram[row.at(0).get<std::string>()]
                            [row.at(1).get<std::string>()] = count;
  }

  for (const auto& j : doc.at("features")) {
    FeatureEntry entry = entry_from_json(j, "features");
    model.feature_model.context_total[entry.feature.context_render()] +=
        entry.count;
    model.feature_model.features[entry.feature.render(false)] =
        std::move(entry);
  }
  for (const auto& j : doc.at("word_features")) {
    FeatureEntry entry = entry_from_json(j, "word_features");
    model.word_model.skeleton_total[entry.feature.render(false)] +=
        entry.count;
    model.word_model.features[entry.feature.render(true)] = std::move(entry);
  }
  // The center node of each word feature is one corpus token, so per-tag
  // word counts fall out of the stored counts.
  std::map<std::string, std::map<std::string, long long>> tag_words;
  for (const auto& [key, entry] : model.word_model.features) {
    if (entry.feature.node.word.empty()) continue;
    tag_words[entry.feature.node.pos][entry.feature.node.word] += entry.count;
  }
  for (const auto& [tag, words] : tag_words) {
    std::string best;
    long long best_count = -1;
    for (const auto& [word, count] : words) {
      if (count > best_count) {
        best = word;
        best_count = count;
      }
    }
    model.word_model.pos_backoff[tag] = best;
  }

  const Json& trigram = doc.at("trigram");
  for (const auto& row : trigram.at("uni")) {
    const auto count = row.at(2).get<long long>();
    if (count < 1) throw DepgenError("invalid count in model file (trigram)");
    const LmToken tok{row.at(0).get<std::string>(),
                      row.at(1).get<std::string>()};
    model.trigram.uni[tok] = count;
    model.trigram.total_tokens += count;
  }
  for (const auto& row : trigram.at("bi")) {
    const auto count = row.at(4).get<long long>();
    if (count < 1) throw DepgenError("invalid count in model file (trigram)");
    const LmToken a{row.at(0).get<std::string>(), row.at(1).get<std::string>()};
    const LmToken b{row.at(2).get<std::string>(), row.at(3).get<std::string>()};
    model.trigram.bi[{a, b}] = count;
    model.trigram.bi_context[a] += count;
  }
  for (const auto& row : trigram.at("tri")) {
    const auto count = row.at(6).get<long long>();
    if (count < 1) throw DepgenError("invalid count in model file (trigram)");
    const LmToken a{row.at(0).get<std::string>(), row.at(1).get<std::string>()};
    const LmToken b{row.at(2).get<std::string>(), row.at(3).get<std::string>()};
    const LmToken c{row.at(4).get<std::string>(), row.at(5).get<std::string>()};
    model.trigram.tri[{a, b, c}] = count;
    model.trigram.tri_context[{a, b}] += count;
  }
  return model;
}

}  // namespace depgen
