#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace aida {

enum class DomainRole { target, source };

const char* to_string(DomainRole role);

struct TechnicalDocument {
    std::string doc_id;
    DomainRole role = DomainRole::target;
    std::string domain_name;
    std::string title;
    std::string body;
};

/// The document sets the agents review: at least one target-domain and one
/// source-domain document, with a consistent domain name per role.
struct Corpus {
    std::vector<TechnicalDocument> documents;
    std::string target_domain;
    std::string source_domain;

    bool operator==(const Corpus&) const;

    /// Loads a manifest of the form
    ///   {target_domain, source_domain, documents:[{id, role, title, file}]}
    /// with one plain-text body file per document, resolved relative to the
    /// manifest's directory.
    static Corpus load(const std::filesystem::path& manifest_path);
};

/// Canonical one-block rendering of a document (title line, then body);
/// used both for review memories and for prompts that embed documents.
std::string document_text(const TechnicalDocument& document);

}  // namespace aida
