#include "chorus/agent.hpp"

#include "chorus/errors.hpp"
#include "chorus/random.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace chorus {

namespace {

std::string lowercase(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::vector<std::string> split_words(const std::string& text) {
    std::vector<std::string> words;
    std::string word;
    std::istringstream in(text);
    while (in >> word) words.push_back(word);
    return words;
}

std::string strip_punct(const std::string& word) {
    std::string out;
    for (unsigned char c : word) {
        if (std::isalnum(c)) out.push_back(static_cast<char>(std::tolower(c)));
    }
    return out;
}

const std::set<std::string>& stopwords() {
    static const std::set<std::string> kStop = {
        "that", "this", "with", "from", "have", "must", "should", "their",
        "there", "about", "more", "need", "needs", "will", "every", "than",
    };
    return kStop;
}

std::string excerpt(const std::string& body, std::size_t max_words = 8) {
    std::vector<std::string> words = split_words(body);
    if (words.size() > max_words) words.resize(max_words);
    std::string out;
    for (std::size_t i = 0; i < words.size(); ++i) {
        if (i > 0) out += ' ';
        out += words[i];
    }
    return out;
}

std::string archetype_label(Archetype a) {
    switch (a) {
    case Archetype::CasualUser: return "casual user";
    case Archetype::Expert: return "expert";
    case Archetype::Advocate: return "advocate";
    case Archetype::Skeptic: return "skeptic";
    case Archetype::Custom: return "participant";
    }
    return "participant";
}

Archetype roster_archetype(const AgentContext& ctx, const ActorId& id) {
    for (const RosterEntry& e : ctx.roster) {
        if (e.actor_id == id) return e.archetype;
    }
    return Archetype::Custom;
}

const std::vector<std::string>& filler_lexicon() {
    static const std::vector<std::string> kWords = {
        "communities", "infrastructure", "planning",  "residents", "summer",
        "heatwaves",   "cooling",        "services",  "support",   "evidence",
        "funding",     "adaptation",     "resilience", "neighbors", "experience",
        "preparedness", "shelters",      "hospitals", "transport", "policy",
    };
    return kWords;
}

} // namespace

AffinityTable AffinityTable::defaults() {
    AffinityTable t;
    t.agrees_with[Archetype::CasualUser] = {Archetype::CasualUser, Archetype::Advocate,
                                            Archetype::Expert};
    t.agrees_with[Archetype::Expert] = {Archetype::Expert, Archetype::Skeptic};
    t.agrees_with[Archetype::Advocate] = {Archetype::Advocate, Archetype::CasualUser,
                                          Archetype::Expert};
    t.agrees_with[Archetype::Skeptic] = {Archetype::Expert};
    t.agrees_with[Archetype::Custom] = {};
    return t;
}

bool AffinityTable::agrees(Archetype own, Archetype target) const {
    auto it = agrees_with.find(own);
    return it != agrees_with.end() && it->second.count(target) != 0;
}

bool matches_belief_keyword(const std::vector<std::string>& beliefs, const std::string& text) {
    const std::string haystack = lowercase(text);
    for (const std::string& belief : beliefs) {
        for (const std::string& raw : split_words(belief)) {
            const std::string kw = strip_punct(raw);
            if (kw.size() < 4 || stopwords().count(kw) != 0) continue;
            if (haystack.find(kw) != std::string::npos) return true;
        }
    }
    return false;
}

std::vector<VoteDecision> ScriptedAgent::select_vote_candidates(const AgentContext& ctx,
                                                                const std::vector<Post>& pool,
                                                                int max_candidates) {
    // Most recent first: highest post ids.
    std::vector<const Post*> sorted;
    sorted.reserve(pool.size());
    for (const Post& p : pool) sorted.push_back(&p);
    std::sort(sorted.begin(), sorted.end(),
              [](const Post* a, const Post* b) { return a->post_id > b->post_id; });

    std::vector<VoteDecision> decisions;
    for (const Post* p : sorted) {
        if (static_cast<int>(decisions.size()) >= max_candidates) break;
        const bool aligned = matches_belief_keyword(ctx.persona.core_beliefs, p->body);
        decisions.push_back({p->post_id,
                             aligned ? VoteDirection::Up : VoteDirection::Down,
                             aligned ? "belief keyword match" : "no belief keyword match"});
    }
    return decisions;
}

PostIntent ScriptedAgent::select_reply_target(const AgentContext& ctx,
                                              const std::vector<Post>& pool) {
    if (pool.empty()) {
        throw AgentError(AgentError::Kind::MalformedOutput,
                         "reply target requested with empty pool");
    }
    const Post* target = &pool.front();
    for (const Post& p : pool) {
        if (p.post_id > target->post_id) target = &p;
    }
    const Archetype author_kind = roster_archetype(ctx, target->author);
    PostIntent intent;
    intent.kind = PostKind::Reply;
    intent.target = target->post_id;
    intent.stance = affinity_.agrees(ctx.persona.archetype, author_kind) ? Stance::Agree
                                                                         : Stance::Disagree;
    return intent;
}

GeneratedContent ScriptedAgent::generate_content(const AgentContext& ctx,
                                                 const PostIntent& intent, ToolSuite& tools) {
    const Persona& persona = ctx.persona;
    const int span = persona.response_length.max - persona.response_length.min + 1;
    const std::uint64_t salt =
        fnv1a64(ctx.actor_id) ^ (static_cast<std::uint64_t>(ctx.own_post_history.size()) * 0x9E3779B97F4A7C15ULL);
    const int target_words =
        persona.response_length.min + static_cast<int>(splitmix64_mix(salt) % span);

    GeneratedContent out;
    std::vector<std::string> words;

    // Lead with archetype and, for replies, the stance + target excerpt, so
    // truncation to short ranges keeps them.
    const std::string label = archetype_label(persona.archetype);
    const bool vowel = label.find_first_of("aeiou") == 0;
    std::string lead = "As a" + std::string(vowel ? "n " : " ") + label + " I ";
    if (intent.kind == PostKind::Reply) {
        const Post* target = nullptr;
        for (const Post& p : ctx.visible_posts) {
            if (intent.target && p.post_id == *intent.target) target = &p;
        }
        lead += (intent.stance == Stance::Disagree ? "disagree with" : "agree with");
        lead += " the point \"";
        lead += target != nullptr ? excerpt(target->body) : std::string("raised earlier");
        lead += "\" because";
    } else {
        lead += "want to say something about " +
                (ctx.discussion_topic.empty() ? std::string("this discussion")
                                              : ctx.discussion_topic) +
                ":";
    }
    for (std::string& w : split_words(lead)) words.push_back(std::move(w));

    if (!persona.core_beliefs.empty()) {
        const std::string& belief =
            persona.core_beliefs[ctx.own_post_history.size() % persona.core_beliefs.size()];
        for (std::string& w : split_words(belief)) words.push_back(std::move(w));
    }

    // Evidence-backed personas consult the search tool when provisioned.
    if (tools.provisioned(ToolId::WebSearch) && !ctx.discussion_topic.empty()) {
        std::vector<SearchResult> results = tools.web_search(ctx.discussion_topic);
        if (!results.empty()) {
            std::string cite = "See also " + results.front().title + ".";
            for (std::string& w : split_words(cite)) words.push_back(std::move(w));
            out.tool_trace.push_back(
                {"web_search", ctx.discussion_topic, results.front().title});
        }
    }

    const auto& filler = filler_lexicon();
    std::size_t next = splitmix64_mix(salt ^ 0x5DEECE66DULL) % filler.size();
    while (static_cast<int>(words.size()) < target_words) {
        words.push_back(filler[next]);
        next = (next + 1) % filler.size();
    }
    if (static_cast<int>(words.size()) > target_words) {
        words.resize(static_cast<std::size_t>(target_words));
    }

    std::string body;
    for (std::size_t i = 0; i < words.size(); ++i) {
        if (i > 0) body += ' ';
        body += words[i];
    }
    if (!body.empty() && body.back() != '.') body += '.';
    out.body = std::move(body);
    return out;
}

} // namespace chorus
