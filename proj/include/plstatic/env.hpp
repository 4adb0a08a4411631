#pragma once

#include "plstatic/spec.hpp"
#include "plstatic/term.hpp"

#include <map>
#include <string>
#include <vector>

namespace plstatic {

enum class EdgeKind { Pos, IsHead, IsTail, Union, Compatible, HasType, ArtificialLink };

struct EnvEdge {
    int from = -1;
    int to = -1;
    EdgeKind kind = EdgeKind::Pos;
    int index = -1;  // argument position for Pos
};

struct EnvNode {
    TermPtr term;
    std::string name;  // display name; type variables and holders are named
    Spec dom;
    bool artificial = false;
    int varId = -1;
    bool isTypeVar = false;
    bool isHolder = false;
    int holderOwner = -1;            // node whose element type this holder stores
    EdgeKind holderMarker = EdgeKind::HasType;  // Union or Compatible when isHolder
    bool isWatcherPart = false;
    bool varFromAnnotation = false;  // a var domain that stems from an annotation
    bool errorRecorded = false;
};

struct EnvError {
    SourceLoc loc;
    std::string message;
    Spec expected;
    Spec actual;
    PredicateIndicator context;
};

/// Per-clause directed environment graph: term occurrences annotated with
/// type domains, connected by structural and type-variable edges.
/// Occurrence identity: variables share one node per clause variable, every
/// other term occurrence is its own node.
class Env {
public:
    Env(PredicateIndicator context, SourceLoc loc)
        : context_(std::move(context)), loc_(std::move(loc)) {}

    const PredicateIndicator& context() const { return context_; }
    const SourceLoc& clauseLoc() const { return loc_; }

    /// Node for a term occurrence; created with its abstraction as domain.
    int nodeFor(const TermPtr& term);
    /// Looks up an existing node without creating one (-1 when absent).
    int findNode(const TermPtr& term) const;
    int findVarNode(int varId) const;

    int addSynthetic(TermPtr term, std::string name, Spec dom);
    int typeVarNode(const std::string& instanceName);
    int holderNode(int ownerNode, EdgeKind marker);

    void addEdge(int from, int to, EdgeKind kind, int index = -1);

    const std::vector<EnvNode>& nodes() const { return nodes_; }
    EnvNode& node(int id) { return nodes_[id]; }
    const EnvNode& node(int id) const { return nodes_[id]; }
    const std::vector<EnvEdge>& edges() const { return edges_; }

    const Spec& dom(int id) const { return nodes_[id].dom; }
    void setDom(int id, Spec dom) { nodes_[id].dom = std::move(dom); }

    void recordError(const SourceLoc& loc, std::string message, Spec expected, Spec actual);
    const std::vector<EnvError>& errors() const { return errors_; }
    bool hasErrors() const { return !errors_.empty(); }

    int watcher() const { return watcher_; }
    void setWatcher(int id) { watcher_ = id; }

    /// Domain of a type variable instance (any when absent); test support.
    Spec typeVarDom(const std::string& instanceName) const;
    const std::vector<int>& typeVarNodes() const { return typeVarNodes_; }

    int nextArtificialId() { return artificialCounter_++; }

private:
    PredicateIndicator context_;
    SourceLoc loc_;
    std::vector<EnvNode> nodes_;
    std::vector<EnvEdge> edges_;
    std::map<const Term*, int> byTerm_;
    std::map<int, int> byVar_;
    std::map<std::string, int> typeVarByName_;
    std::vector<int> typeVarNodes_;
    int watcher_ = -1;
    int artificialCounter_ = 0;
    std::vector<EnvError> errors_;
};

}  // namespace plstatic
