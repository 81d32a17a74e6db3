// SPDX-FileCopyrightText: 2026 The srgrade authors
// SPDX-License-Identifier: Apache-2.0

#include "srg/synth.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

#include "srg/errors.hpp"

namespace srg {

namespace fs = std::filesystem;

namespace {

struct NodeDef {
    const char* id;
    const char* concept_id;
    Bloom bloom;
};

struct EdgeDef {
    const char* source;
    const char* target;
    const char* relation;
};

struct ItemDef {
    const char* id;
    const char* prompt;
    const char* rubric;
    const char* root;
    std::vector<std::pair<const char*, const char*>> concepts;  // (concept, parent)
    std::vector<NodeDef> nodes;
    std::vector<EdgeDef> edges;
};

using B = Bloom;

const std::vector<ItemDef>& item_defs() {
    static const std::vector<ItemDef> defs = {
        {"R1-1",
         "Draw a model that shows how you can see an object in a mirror.",
         "Light rays strike the mirror, reflect at equal angles about the normal and enter the eye.",
         "Light_Model",
         {{"Light", "Light_Model"}, {"Light_Ray", "Light"}, {"Reflected_Ray", "Light"}, {"Scattered_Ray", "Light"},
          {"Surface", "Light_Model"}, {"Flat_Mirror", "Surface"}, {"Rough_Surface", "Surface"},
          {"Observer", "Light_Model"}, {"Eye", "Observer"}, {"Camera", "Observer"},
          {"Geometry", "Light_Model"}, {"Equal_Angles", "Geometry"}, {"Normal_Line", "Geometry"}},
         {{"ray", "Light_Ray", B::Understand}, {"mirror", "Flat_Mirror", B::Remember},
          {"reflected", "Reflected_Ray", B::Understand}, {"eye", "Eye", B::Remember},
          {"angles", "Equal_Angles", B::Apply}, {"normal", "Normal_Line", B::Apply}},
         {{"ray", "mirror", "strikes"}, {"mirror", "reflected", "produces"}, {"reflected", "eye", "enters"},
          {"angles", "reflected", "governs"}, {"normal", "angles", "defines"}, {"ray", "normal", "meets"}}},
        {"J2-1",
         "Draw a model that explains why a plant kept in sunlight grows taller.",
         "Sunlight reaches the leaf, water and carbon dioxide supply photosynthesis, and photosynthesis drives growth.",
         "Plant_Model",
         {{"Energy", "Plant_Model"}, {"Sunlight", "Energy"}, {"Heat", "Energy"},
          {"Plant_Part", "Plant_Model"}, {"Leaf", "Plant_Part"}, {"Root", "Plant_Part"}, {"Stem", "Plant_Part"},
          {"Process", "Plant_Model"}, {"Photosynthesis", "Process"}, {"Respiration", "Process"},
          {"Outcome", "Plant_Model"}, {"Growth", "Outcome"}, {"Wilting", "Outcome"},
          {"Resource", "Plant_Model"}, {"Water_Uptake", "Resource"}, {"Carbon_Dioxide", "Resource"}},
         {{"sun", "Sunlight", B::Remember}, {"leaf", "Leaf", B::Remember}, {"water", "Water_Uptake", B::Understand},
          {"photo", "Photosynthesis", B::Apply}, {"co2", "Carbon_Dioxide", B::Understand},
          {"growth", "Growth", B::Analyze}},
         {{"sun", "leaf", "reaches"}, {"water", "photo", "supplies"}, {"co2", "photo", "supplies"},
          {"leaf", "photo", "performs"}, {"photo", "growth", "causes"}, {"sun", "photo", "powers"}}},
        {"M3-1",
         "Draw a model that shows why an iron nail moves toward a bar magnet.",
         "The bar magnet has two poles, field lines run between them and reach the nail, which is attracted.",
         "Magnet_Model",
         {{"Magnet", "Magnet_Model"}, {"Bar_Magnet", "Magnet"}, {"North_Pole", "Magnet"}, {"South_Pole", "Magnet"},
          {"Force", "Magnet_Model"}, {"Attraction", "Force"}, {"Repulsion", "Force"},
          {"Field", "Magnet_Model"}, {"Field_Lines", "Field"}, {"Field_Strength", "Field"},
          {"Object", "Magnet_Model"}, {"Iron_Nail", "Object"}, {"Plastic_Cup", "Object"}},
         {{"bar", "Bar_Magnet", B::Remember}, {"north", "North_Pole", B::Remember},
          {"south", "South_Pole", B::Remember}, {"lines", "Field_Lines", B::Understand},
          {"nail", "Iron_Nail", B::Understand}, {"attract", "Attraction", B::Apply}},
         {{"bar", "north", "has"}, {"bar", "south", "has"}, {"north", "lines", "emits"},
          {"lines", "south", "connects"}, {"lines", "nail", "reaches"}, {"nail", "attract", "experiences"}}},
        {"H4-1",
         "Draw a model of why the bathroom mirror fogs during a hot shower and design a way to prevent it.",
         "Hot water produces vapor, vapor condenses on the cold mirror to form fog, and a design keeps the mirror warm.",
         "Shower_Model",
         {{"Water", "Shower_Model"}, {"Hot_Water", "Water"}, {"Water_Vapor", "Water"},
          {"Condensed_Droplets", "Water"}, {"Energy", "Shower_Model"}, {"Heat_Transfer", "Energy"},
          {"Temperature_Difference", "Energy"}, {"Surface", "Shower_Model"}, {"Cold_Mirror", "Surface"},
          {"Warm_Wall", "Surface"}, {"Phenomenon", "Shower_Model"}, {"Fogging", "Phenomenon"},
          {"Evaporation", "Phenomenon"}, {"Condensation", "Phenomenon"}, {"Design", "Shower_Model"},
          {"Anti_Fog_Design", "Design"}, {"Open_Window", "Design"}},
         {{"hot", "Hot_Water", B::Remember}, {"vapor", "Water_Vapor", B::Understand},
          {"cond", "Condensation", B::Apply}, {"mirror", "Cold_Mirror", B::Remember},
          {"fog", "Fogging", B::Analyze}, {"design", "Anti_Fog_Design", B::Create}},
         {{"hot", "vapor", "produces"}, {"vapor", "mirror", "reaches"}, {"vapor", "cond", "undergoes"},
          {"mirror", "cond", "triggers"}, {"cond", "fog", "causes"}, {"design", "fog", "prevents"}}},
        {"H5-1",
         "Draw a model of why a metal spoon left in hot soup gets hot, and judge which spoon is safer to use.",
         "Hot soup heats the spoon, vibrating particles pass heat along it, and the energy flow informs the material choice.",
         "Conduction_Model",
         {{"Object", "Conduction_Model"}, {"Metal_Spoon", "Object"}, {"Wooden_Spoon", "Object"},
          {"Hot_Soup", "Object"}, {"Particle", "Conduction_Model"}, {"Vibrating_Particles", "Particle"},
          {"Still_Particles", "Particle"}, {"Energy", "Conduction_Model"}, {"Heat_Flow", "Energy"},
          {"Thermal_Energy", "Energy"}, {"Judgment", "Conduction_Model"}, {"Material_Choice", "Judgment"},
          {"Safety_Claim", "Judgment"}},
         {{"soup", "Hot_Soup", B::Remember}, {"spoon", "Metal_Spoon", B::Remember},
          {"vib", "Vibrating_Particles", B::Understand}, {"flow", "Heat_Flow", B::Apply},
          {"energy", "Thermal_Energy", B::Analyze}, {"choice", "Material_Choice", B::Evaluate}},
         {{"soup", "spoon", "heats"}, {"spoon", "vib", "contains"}, {"vib", "flow", "passes"},
          {"flow", "energy", "transfers"}, {"energy", "choice", "informs"}, {"soup", "flow", "drives"}}},
        {"J6-1",
         "Draw a model that explains how the sound of a drum reaches your ear and what makes it louder.",
         "The drum vibrates, vibrations disturb the air, the air carries a sound wave to the ear, and vibration size sets loudness.",
         "Sound_Model",
         {{"Source", "Sound_Model"}, {"Drum", "Source"}, {"Guitar_String", "Source"},
          {"Wave", "Sound_Model"}, {"Vibration", "Wave"}, {"Sound_Wave", "Wave"}, {"Echo", "Wave"},
          {"Medium", "Sound_Model"}, {"Air", "Medium"}, {"Water_Medium", "Medium"},
          {"Receiver", "Sound_Model"}, {"Ear", "Receiver"}, {"Microphone", "Receiver"},
          {"Property", "Sound_Model"}, {"Loudness", "Property"}, {"Pitch", "Property"}},
         {{"drum", "Drum", B::Remember}, {"vib", "Vibration", B::Understand}, {"air", "Air", B::Remember},
          {"wave", "Sound_Wave", B::Apply}, {"ear", "Ear", B::Remember}, {"loud", "Loudness", B::Analyze}},
         {{"drum", "vib", "produces"}, {"vib", "air", "disturbs"}, {"air", "wave", "carries"},
          {"wave", "ear", "reaches"}, {"vib", "loud", "determines"}, {"wave", "loud", "affects"}}},
    };
    return defs;
}

std::string words(std::string_view concept_id) {
    std::string out;
    for (char c : concept_id) {
        out += c == '_' ? ' ' : static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    return out;
}

Rect grid_region(std::size_t i) {
    const double x0 = 0.05 + static_cast<double>(i % 3) * 0.32;
    const double y0 = 0.1 + static_cast<double>(i / 3) * 0.45;
    return {x0, y0, x0 + 0.25, y0 + 0.3};
}

ItemSpec build_item(const ItemDef& d) {
    ItemSpec item;
    item.item_id = d.id;
    item.prompt_text = d.prompt;
    item.image_refs = {std::string("images/") + d.id + ".png"};
    item.rubric_text = d.rubric;

    std::vector<Ontology::Concept> concepts{{d.root, std::nullopt}};
    for (const auto& [c, parent] : d.concepts) concepts.push_back({c, std::string(parent)});
    std::set<std::string> relations;
    for (const EdgeDef& e : d.edges) relations.insert(e.relation);
    relations.insert("related_to");
    item.ontology = Ontology(d.root, std::move(concepts), {relations.begin(), relations.end()});

    std::vector<SrgNode> nodes;
    for (std::size_t i = 0; i < d.nodes.size(); ++i) {
        const NodeDef& n = d.nodes[i];
        nodes.push_back({n.id, n.concept_id, n.bloom, {words(n.concept_id) + " drawn", grid_region(i)}});
    }
    std::vector<SrgEdge> edges;
    for (const EdgeDef& e : d.edges) edges.push_back({e.source, e.target, e.relation, {}});
    item.gold = Srg(d.id, Role::Gold, nodes, edges);
    item.highest_bloom = *item.gold.highest_bloom();

    for (const SrgNode& n : item.gold.nodes()) {
        const Rect& r = *n.evidence.region;
        item.phi[node_key(n)] = {node_key(n),
                                 "Show the " + words(n.concept_id) + " in your model",
                                 {{OverlayPrimitive::Shape::Marker, r.x0, r.y0, r.x1, r.y1, {}}}};
    }
    for (const SrgEdge& e : item.gold.edges()) {
        const SrgNode* s = item.gold.find_node(e.source);
        const SrgNode* t = item.gold.find_node(e.target);
        const Rect& rs = *s->evidence.region;
        const Rect& rt = *t->evidence.region;
        const std::string key = edge_key(e, item.gold);
        item.phi[key] = {key,
                         "Show how the " + words(s->concept_id) + " " + words(e.relation) + " the " +
                             words(t->concept_id),
                         {{OverlayPrimitive::Shape::Arrow, (rs.x0 + rs.x1) / 2, (rs.y0 + rs.y1) / 2,
                           (rt.x0 + rt.x1) / 2, (rt.y0 + rt.y1) / 2, {}}}};
    }
    validate_item(item);
    return item;
}

/// Student copy of a gold subgraph with renamed ids and shuffled node order.
class Builder {
public:
    explicit Builder(const Srg& gold) : gold_(gold) {
        for (const SrgNode& n : gold.nodes()) nodes_.push_back(n);
        for (const SrgEdge& e : gold.edges()) edges_.push_back(e);
    }

    void remove_node(const std::string& id) {
        std::erase_if(nodes_, [&](const SrgNode& n) { return n.id == id; });
        std::erase_if(edges_, [&](const SrgEdge& e) { return e.source == id || e.target == id; });
    }

    void remove_edge(std::size_t i) { edges_.erase(edges_.begin() + static_cast<std::ptrdiff_t>(i)); }

    std::vector<SrgNode>& nodes() { return nodes_; }
    std::vector<SrgEdge>& edges() { return edges_; }

    Srg finish(std::mt19937_64& rng) {
        std::shuffle(nodes_.begin(), nodes_.end(), rng);
        std::map<std::string, std::string> rename;
        for (std::size_t i = 0; i < nodes_.size(); ++i) {
            rename[nodes_[i].id] = "n" + std::to_string(i + 1);
            nodes_[i].id = rename[nodes_[i].id];
        }
        for (SrgEdge& e : edges_) {
            e.source = rename.at(e.source);
            e.target = rename.at(e.target);
        }
        return Srg(gold_.item_id(), Role::Student, nodes_, edges_);
    }

private:
    const Srg& gold_;
    std::vector<SrgNode> nodes_;
    std::vector<SrgEdge> edges_;
};

std::size_t uniform_index(std::mt19937_64& rng, std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

Srg plant(const ItemSpec& item, Band target, std::mt19937_64& rng) {
    const Srg& gold = item.gold;
    Builder b(gold);
    switch (target) {
        case Band::Proficient: {
            switch (uniform_index(rng, 3)) {
                case 0: break;
                case 1: b.remove_edge(uniform_index(rng, b.edges().size())); break;
                case 2: {
                    SrgNode& n = b.nodes()[uniform_index(rng, b.nodes().size())];
                    if (n.bloom != Bloom::Create) n.bloom = bloom_from_ordinal(ordinal(n.bloom) + 1);
                    break;
                }
            }
            break;
        }
        case Band::Developing: {
            int lo = ordinal(item.highest_bloom);
            for (const SrgNode& n : gold.nodes()) lo = std::min(lo, ordinal(n.bloom));
            const int hi = ordinal(item.highest_bloom);
            std::vector<std::string> mid;
            for (const SrgNode& n : gold.nodes()) {
                if (ordinal(n.bloom) > lo && ordinal(n.bloom) < hi) mid.push_back(n.id);
            }
            if (mid.size() < 3) {
                for (const SrgNode& n : gold.nodes()) {
                    if (ordinal(n.bloom) < hi && std::find(mid.begin(), mid.end(), n.id) == mid.end()) {
                        mid.push_back(n.id);
                    }
                }
            }
            std::shuffle(mid.begin(), mid.end(), rng);
            const std::size_t k = std::min<std::size_t>(mid.size(), 2 + uniform_index(rng, 2));
            for (std::size_t i = 0; i < k; ++i) b.remove_node(mid[i]);
            break;
        }
        case Band::Beginning: {
            const std::size_t total = gold.node_count() + gold.edge_count();
            std::vector<std::string> ids;
            for (const SrgNode& n : gold.nodes()) ids.push_back(n.id);
            std::shuffle(ids.begin(), ids.end(), rng);
            for (const std::string& id : ids) {
                if (10 * (b.nodes().size() + b.edges().size()) <= 4 * total) break;
                b.remove_node(id);
            }
            break;
        }
    }
    return b.finish(rng);
}

}  // namespace

std::vector<ItemSpec> synthetic_items() {
    std::vector<ItemSpec> items;
    for (const ItemDef& d : item_defs()) items.push_back(build_item(d));
    return items;
}

std::vector<LabeledSample> synthetic_samples(const ItemSpec& item, const SynthOptions& opts) {
    std::vector<std::uint32_t> material{static_cast<std::uint32_t>(opts.seed), static_cast<std::uint32_t>(opts.seed >> 32)};
    for (char c : item.item_id) material.push_back(static_cast<unsigned char>(c));
    std::seed_seq seq(material.begin(), material.end());
    std::mt19937_64 rng(seq);
    std::vector<LabeledSample> out;
    constexpr std::array<Band, 3> kCycle = {Band::Proficient, Band::Developing, Band::Beginning};
    for (std::size_t i = 0; i < opts.samples_per_item; ++i) {
        const Band target = kCycle[i % 3];
        bool placed = false;
        for (std::size_t attempt = 0; attempt < opts.max_attempts && !placed; ++attempt) {
            Srg g = plant(item, target, rng);
            const SimilarityBreakdown br = similarity(g, item.gold, item.ontology, item.scoring);
            if (br.band != target) continue;
            char sid[16];
            std::snprintf(sid, sizeof sid, "s%03zu", i + 1);
            out.push_back({sid, std::move(g), target});
            placed = true;
        }
        if (!placed) {
            throw std::runtime_error(item.item_id + ": could not plant a " + std::string(to_string(target)) +
                                     " sample");
        }
    }
    return out;
}

std::size_t write_synthetic_pack(const fs::path& root, const SynthOptions& opts) {
    std::size_t written = 0;
    for (const ItemSpec& item : synthetic_items()) {
        const fs::path dir = root / item.item_id;
        write_item(dir, item);
        fs::create_directories(dir / "samples");
        std::ofstream labels(dir / "labels.csv", std::ios::trunc);
        labels << "sample_id,band\n";
        for (const LabeledSample& s : synthetic_samples(item, opts)) {
            std::ofstream f(dir / "samples" / (s.sample_id + ".srg.json"), std::ios::trunc);
            f << serialize_srg(s.student) << "\n";
            labels << s.sample_id << "," << to_string(s.human_band) << "\n";
            ++written;
        }
        if (!labels) {
            throw LayoutError("cannot write " + (dir / "labels.csv").string());
        }
    }
    return written;
}

Srg degrade(const ItemSpec& item, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Builder b(item.gold);
    const double drop_node = 0.6 * unit(rng);
    const double drop_edge = 0.6 * unit(rng);
    for (const SrgNode& n : item.gold.nodes()) {
        if (unit(rng) < drop_node) b.remove_node(n.id);
    }
    for (std::size_t i = b.edges().size(); i-- > 0;) {
        if (unit(rng) < drop_edge) b.remove_edge(i);
    }
    for (SrgNode& n : b.nodes()) {
        if (unit(rng) < 0.3 && n.bloom != Bloom::Remember) {
            n.bloom = bloom_from_ordinal(std::max(1, ordinal(n.bloom) - 1 - static_cast<int>(uniform_index(rng, 2))));
        }
    }
    if (unit(rng) < 0.3 && !b.nodes().empty()) {
        std::set<std::string> used;
        for (const SrgNode& n : item.gold.nodes()) used.insert(n.concept_id);
        std::vector<std::string> spare;
        for (const auto& c : item.ontology.concepts()) {
            if (!used.contains(c.id) && c.parent) spare.push_back(c.id);
        }
        const std::string concept_id = spare[uniform_index(rng, spare.size())];
        const std::string anchor = b.nodes()[uniform_index(rng, b.nodes().size())].id;
        b.nodes().push_back({"extra", concept_id, bloom_from_ordinal(1 + static_cast<int>(uniform_index(rng, 3))), {}});
        b.edges().push_back({"extra", anchor, "related_to", {}});
    }
    return b.finish(rng);
}

std::vector<CalibrationRecord> planted_calibration_set(const std::vector<ItemSpec>& items, double gamma1,
                                                       std::size_t per_item, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<CalibrationRecord> out;
    for (const ItemSpec& item : items) {
        ScoringParams p = item.scoring;
        p.gamma1 = gamma1;
        p.gamma2 = 1.0 - gamma1;
        for (std::size_t i = 0; i < per_item; ++i) {
            Srg g = degrade(item, rng);
            const Band label = similarity(g, item.gold, item.ontology, p).band;
            out.push_back({std::move(g), item.gold, &item.ontology, label});
        }
    }
    return out;
}

}  // namespace srg
