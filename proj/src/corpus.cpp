#include "corpus.hpp"

#include "errors.hpp"
#include "util.hpp"

#include <nlohmann/json.hpp>

namespace aida {

using nlohmann::json;

const char* to_string(DomainRole role) {
    return role == DomainRole::target ? "target" : "source";
}

bool Corpus::operator==(const Corpus& other) const {
    if (target_domain != other.target_domain || source_domain != other.source_domain ||
        documents.size() != other.documents.size()) {
        return false;
    }
    for (std::size_t i = 0; i < documents.size(); ++i) {
        const auto& a = documents[i];
        const auto& b = other.documents[i];
        if (a.doc_id != b.doc_id || a.role != b.role || a.domain_name != b.domain_name ||
            a.title != b.title || a.body != b.body) {
            return false;
        }
    }
    return true;
}

Corpus Corpus::load(const std::filesystem::path& manifest_path) {
    json manifest;
    try {
        manifest = json::parse(read_file(manifest_path));
    } catch (const json::exception& ex) {
        fail(Errc::parse_error, "manifest " + manifest_path.string() + ": " + ex.what());
    }

    Corpus corpus;
    try {
        corpus.target_domain = manifest.at("target_domain").get<std::string>();
        corpus.source_domain = manifest.at("source_domain").get<std::string>();
        const auto base = manifest_path.parent_path();
        for (const auto& entry : manifest.at("documents")) {
            TechnicalDocument doc;
            doc.doc_id = entry.at("id").get<std::string>();
            const std::string role = entry.at("role").get<std::string>();
            if (role == "target") {
                doc.role = DomainRole::target;
                doc.domain_name = corpus.target_domain;
            } else if (role == "source") {
                doc.role = DomainRole::source;
                doc.domain_name = corpus.source_domain;
            } else {
                fail(Errc::parse_error, "document " + doc.doc_id + ": unknown role " + role);
            }
            doc.title = entry.at("title").get<std::string>();
            doc.body = read_file(base / entry.at("file").get<std::string>());
            if (trim(doc.body).empty()) {
                fail(Errc::parse_error, "document " + doc.doc_id + " has an empty body");
            }
            corpus.documents.push_back(std::move(doc));
        }
    } catch (const json::exception& ex) {
        fail(Errc::parse_error, "manifest " + manifest_path.string() + ": " + ex.what());
    }

    bool has_target = false;
    bool has_source = false;
    for (const auto& doc : corpus.documents) {
        (doc.role == DomainRole::target ? has_target : has_source) = true;
    }
    require(has_target, Errc::missing_domain, "corpus has no target-domain document");
    require(has_source, Errc::missing_domain, "corpus has no source-domain document");
    return corpus;
}

std::string document_text(const TechnicalDocument& document) {
    return document.title + " (" + to_string(document.role) + " domain: " + document.domain_name +
           ")\n" + document.body;
}

}  // namespace aida
