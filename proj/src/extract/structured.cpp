#include "extract/structured.hpp"

namespace ddpdeid {
namespace {

class Walker {
 public:
  Walker(std::string_view source, const ExtractionContext& ctx, std::vector<PiiMatch>& out)
      : source_(source), ctx_(ctx), out_(out) {}

  void visit(const Json& node) {
    if (node.is_object()) {
      for (const auto& [label, value] : node.items()) {
        if (ctx_.labels.is_exempt(label)) continue;
        label_value(label, value);
        username_label_timestamp(label, value);
        visit(value);
      }
    } else if (node.is_array()) {
      list_with_timestamp(node);
      for (const Json& child : node) visit(child);
    }
  }

 private:
  void emit(const std::string& value, Rule rule) {
    out_.push_back(PiiMatch{value, Category::Username, std::string(source_), rule, {}});
  }

  void label_value(const std::string& label, const Json& value) {
    if (!ctx_.labels.is_sender(label)) return;
    if (value.is_string()) {
      const auto& s = value.get_ref<const std::string&>();
      if (ctx_.accepts_username(s)) emit(s, Rule::LabelValue);
    } else if (value.is_array()) {
      for (const Json& item : value) {
        if (!item.is_string()) continue;
        const auto& s = item.get_ref<const std::string&>();
        if (ctx_.accepts_username(s)) emit(s, Rule::LabelValue);
      }
    }
  }

  void username_label_timestamp(const std::string& label, const Json& value) {
    if (!value.is_string() || !ctx_.accepts_username(label)) return;
    if (is_timestamp(value.get_ref<const std::string&>(), ctx_.labels.timestamps)) {
      emit(label, Rule::UsernameLabelTimestamp);
    }
  }

  void list_with_timestamp(const Json& list) {
    bool has_timestamp = false;
    for (const Json& item : list) {
      if (item.is_string() &&
          is_timestamp(item.get_ref<const std::string&>(), ctx_.labels.timestamps)) {
        has_timestamp = true;
        break;
      }
    }
    if (!has_timestamp) return;
    for (const Json& item : list) {
      if (!item.is_string()) continue;
      const auto& s = item.get_ref<const std::string&>();
      if (is_timestamp(s, ctx_.labels.timestamps)) continue;
      if (ctx_.accepts_username(s)) emit(s, Rule::ListWithTimestamp);
    }
  }

  std::string_view source_;
  const ExtractionContext& ctx_;
  std::vector<PiiMatch>& out_;
};

}  // namespace

std::vector<PiiMatch> extract_structured(const Json& doc, std::string_view source,
                                         const ExtractionContext& ctx) {
  std::vector<PiiMatch> out;
  Walker(source, ctx, out).visit(doc);
  return out;
}

void for_each_string(const Json& doc, const std::function<void(const std::string&)>& fn) {
  if (doc.is_string()) {
    fn(doc.get_ref<const std::string&>());
  } else if (doc.is_object()) {
    for (const auto& [label, value] : doc.items()) for_each_string(value, fn);
  } else if (doc.is_array()) {
    for (const Json& child : doc) for_each_string(child, fn);
  }
}

}  // namespace ddpdeid
