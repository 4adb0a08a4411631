#include "plstatic/env.hpp"

#include "plstatic/abstraction.hpp"
#include "plstatic/lattice.hpp"

namespace plstatic {

int Env::nodeFor(const TermPtr& term) {
    if (term->isVar() && term->varId >= 0) {
        auto it = byVar_.find(term->varId);
        if (it != byVar_.end()) return it->second;
    } else {
        auto it = byTerm_.find(term.get());
        if (it != byTerm_.end()) return it->second;
    }
    EnvNode node;
    node.term = term;
    node.varId = term->isVar() ? term->varId : -1;
    node.name = term->isVar() ? term->text : std::string();
    node.dom = abstractTerm(term);
    nodes_.push_back(std::move(node));
    int id = static_cast<int>(nodes_.size()) - 1;
    if (term->isVar() && term->varId >= 0) byVar_[term->varId] = id;
    else byTerm_[term.get()] = id;
    return id;
}

int Env::findNode(const TermPtr& term) const {
    if (term->isVar() && term->varId >= 0) return findVarNode(term->varId);
    auto it = byTerm_.find(term.get());
    return it == byTerm_.end() ? -1 : it->second;
}

int Env::findVarNode(int varId) const {
    auto it = byVar_.find(varId);
    return it == byVar_.end() ? -1 : it->second;
}

int Env::addSynthetic(TermPtr term, std::string name, Spec dom) {
    EnvNode node;
    node.term = std::move(term);
    node.name = std::move(name);
    node.dom = std::move(dom);
    node.artificial = true;
    nodes_.push_back(std::move(node));
    int id = static_cast<int>(nodes_.size()) - 1;
    if (nodes_[id].term) byTerm_[nodes_[id].term.get()] = id;
    return id;
}

int Env::typeVarNode(const std::string& instanceName) {
    auto it = typeVarByName_.find(instanceName);
    if (it != typeVarByName_.end()) return it->second;
    EnvNode node;
    node.name = instanceName;
    node.dom = Spec::any();
    node.artificial = true;
    node.isTypeVar = true;
    nodes_.push_back(std::move(node));
    int id = static_cast<int>(nodes_.size()) - 1;
    typeVarByName_[instanceName] = id;
    typeVarNodes_.push_back(id);
    return id;
}

int Env::holderNode(int ownerNode, EdgeKind marker) {
    std::string name = "T__" + std::to_string(nextArtificialId());
    TermPtr term = Term::makeVar(name, -1);
    EnvNode node;
    node.term = term;
    node.name = name;
    node.dom = Spec::any();
    node.artificial = true;
    node.isHolder = true;
    node.holderOwner = ownerNode;
    node.holderMarker = marker;
    nodes_.push_back(std::move(node));
    int id = static_cast<int>(nodes_.size()) - 1;
    byTerm_[term.get()] = id;
    addEdge(ownerNode, id, EdgeKind::HasType);
    return id;
}

void Env::addEdge(int from, int to, EdgeKind kind, int index) {
    for (const EnvEdge& e : edges_) {
        if (e.from == from && e.to == to && e.kind == kind && e.index == index) return;
    }
    edges_.push_back({from, to, kind, index});
}

void Env::recordError(const SourceLoc& loc, std::string message, Spec expected, Spec actual) {
    errors_.push_back({loc, std::move(message), std::move(expected), std::move(actual), context_});
}

Spec Env::typeVarDom(const std::string& instanceName) const {
    for (int id : typeVarNodes_) {
        const EnvNode& n = nodes_[id];
        // instance names are "<var>#<goal>": match the variable part
        std::string base = n.name.substr(0, n.name.find('#'));
        if (n.name == instanceName || base == instanceName) return n.dom;
    }
    return Spec::any();
}

}  // namespace plstatic
