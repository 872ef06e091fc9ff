#!/usr/bin/env python3
"""Generates the bundled end-to-end fixture: a small tweet corpus, topics,
a concept store, qrels and a concept override file.

Deterministic: rerunning rewrites byte-identical files.
"""

import json
import random
from pathlib import Path

HERE = Path(__file__).resolve().parent
OUT = HERE / "e2e"

TOPICS = [
    ("MB01", "Mila Kunis in Oz movie", 21.3),
    ("MB02", "UK wine industry", 18.7),
    ("MB03", "Australian Open Djokovic vs. Murray", 25.2),
    ("MB04", "memories of Mr. Rogers", 15.9),
    ("MB05", "water shortage", 27.4),
]

# Words a relevant tweet draws from: the query side and the knowledge side.
TOPIC_WORDS = {
    "MB01": (["Mila", "Kunis", "Oz", "movie"],
             ["actress", "witch", "Theodora", "Franco", "Raimi", "wizard", "great", "powerful",
              "Disney", "premiere", "trailer", "ugly", "green", "Ukrainian"]),
    "MB02": (["UK", "wine", "industry"],
             ["vineyard", "English", "sparkling", "Sussex", "Kent", "grape", "harvest",
              "Britain", "British", "vintage", "champagne", "winery", "exports"]),
    "MB03": (["Australian", "Open", "Djokovic", "Murray"],
             ["tennis", "Melbourne", "final", "Novak", "Andy", "Serbian", "Scot", "grand",
              "slam", "set", "court", "champion", "Laver"]),
    "MB04": (["memories", "Rogers"],
             ["Fred", "neighborhood", "television", "sweater", "Pittsburgh", "kindness",
              "puppets", "children", "PBS", "trolley", "neighbor", "host"]),
    "MB05": (["water", "shortage"],
             ["drought", "scarcity", "rationing", "reservoir", "rainfall", "supply", "crisis",
              "wells", "farmers", "irrigation", "dry", "conservation"]),
}

FILLER = ("today tomorrow coffee traffic music lunch weekend phone game friends happy tired "
          "school office weather sunny cloudy breakfast dinner party birthday photo video "
          "news city train bus concert guitar book library park dog cat garden shopping "
          "market pizza burger football basketball soccer goal team season election vote "
          "senator budget economy stock price bank market report meeting project deadline "
          "email laptop update software release launch startup founder investor").split()

GLUE = "the a is so and on with at my this just about new really".split()


def sentence(rng, words, n):
    out = []
    for _ in range(n):
        out.append(rng.choice(words) if rng.random() < 0.75 else rng.choice(GLUE))
    return " ".join(out)


def make_corpus(rng):
    docs = []
    labels = {}  # doc id -> (topic, grade)
    n = 0

    def add(text, t, titles=None, label=None):
        nonlocal n
        n += 1
        doc_id = f"t{n:04d}"
        rec = {"id": doc_id, "text": text, "post_time": round(t, 4)}
        if titles:
            rec["url_titles"] = titles
        docs.append(rec)
        if label:
            labels[doc_id] = label
        return doc_id

    for topic_id, query, tq in TOPICS:
        query_words, know_words = TOPIC_WORDS[topic_id]
        for i in range(26):
            kind = i % 4
            # Most documents predate the query; a few arrive after it.
            t = rng.uniform(0.5, tq - 0.05) if i < 22 else rng.uniform(tq + 0.01, 30.0)
            if kind == 0:
                # query words plus knowledge words: highly relevant
                words = query_words + know_words
                text = sentence(rng, words, rng.randint(8, 14))
                text += " " + " ".join(rng.sample(query_words, min(2, len(query_words))))
                grade = 2 if topic_id != "MB04" else 1
            elif kind == 1:
                # knowledge words only: minimally relevant, hard to find by the query
                text = sentence(rng, know_words + FILLER[:10], rng.randint(8, 12))
                grade = 1
            elif kind == 2:
                # one query word amid filler: mostly not relevant
                text = sentence(rng, FILLER, rng.randint(7, 11)) + " " + rng.choice(query_words)
                grade = 0
            else:
                words = query_words + know_words[:5]
                text = sentence(rng, words, rng.randint(6, 10))
                grade = 1
            titles = None
            if rng.random() < 0.25:
                titles = [sentence(rng, know_words, 4).title()]
                text += " http://t.co/" + "".join(rng.choice("abcdefgh123") for _ in range(6))
            add(text, t, titles, (topic_id, grade))

    while len(docs) < 200:
        t = rng.uniform(0.5, 30.0)
        add(sentence(rng, FILLER, rng.randint(6, 14)), t)

    rng.shuffle(docs)
    # Renumber after shuffling so ids carry no topic information.
    remap = {}
    for i, d in enumerate(docs, start=1):
        new_id = f"t{i:04d}"
        remap[d["id"]] = new_id
        d["id"] = new_id
    labels = {remap[k]: v for k, v in labels.items()}
    return docs, labels


def main():
    rng = random.Random(20130101)
    OUT.mkdir(exist_ok=True)
    docs, labels = make_corpus(rng)

    lines = [json.dumps(d, sort_keys=True) for d in docs]
    # Rejected records: retweets, a stopword-only tweet and malformed lines.
    rejects = [
        json.dumps({"id": "rt0001", "text": "RT @fan: Mila Kunis in the new Oz movie",
                    "post_time": 3.5}),
        json.dumps({"id": "rt0002", "text": "RT @vino: UK wine industry booming", "post_time": 4.2}),
        json.dumps({"id": "rt0003", "text": "  RT @tennis: Djokovic beats Murray",
                    "post_time": 9.1}),
        json.dumps({"id": "rt0004", "text": "RT @pbs: memories of Mr. Rogers", "post_time": 2.2}),
        json.dumps({"id": "rt0005", "text": "RT @news: water shortage looms", "post_time": 12.0}),
        json.dumps({"id": "rt0006", "text": "RT this", "post_time": 13.0}),
        json.dumps({"id": "sw0001", "text": "and the of to in is it", "post_time": 6.0}),
        '{"id": "bad0001", "text": "missing time"}',
        "not json at all",
    ]
    positions = [17, 40, 66, 90, 120, 150, 171, 185, 199]
    for pos, rec in zip(positions, rejects):
        lines.insert(pos, rec)
    (OUT / "corpus.jsonl").write_text("\n".join(lines) + "\n")

    topics = [json.dumps({"id": t, "query": q, "query_time": tq}) for t, q, tq in TOPICS]
    (OUT / "topics.jsonl").write_text("\n".join(topics) + "\n")

    post_time = {d["id"]: d["post_time"] for d in docs}
    tq_of = {t: tq for t, _, tq in TOPICS}
    qrels = []
    for doc_id in sorted(labels):
        topic_id, grade = labels[doc_id]
        if post_time[doc_id] >= tq_of[topic_id]:
            continue
        qrels.append((topic_id, doc_id, grade))
    # A few judged-irrelevant filler documents per topic.
    filler_ids = sorted(d["id"] for d in docs if d["id"] not in labels)
    for topic_id, _, _ in TOPICS:
        for doc_id in rng.sample(filler_ids, 5):
            qrels.append((topic_id, doc_id, 0))
    qrels.sort()
    (OUT / "qrels.txt").write_text("".join(f"{t} 0 {d} {g}\n" for t, d, g in qrels))

    concepts = [
        {"concept_id": "m.0c9c0", "name": "Mila Kunis",
         "aliases": ["Milena Markovna Kunis"], "notable_for": ["Actor"],
         "notable_types": ["Celebrity"],
         "description": "Mila Kunis is a Ukrainian born American actress. She played the witch "
                        "Theodora in Oz the Great and Powerful, a Disney film directed by Sam "
                        "Raimi, opposite James Franco. Oz the Great and Powerful premiered in 2013.",
         "domain_properties": {"film": "Oz the Great and Powerful; Black Swan; Ted"}},
        {"concept_id": "m.0hgdq", "name": "The Wizard of Oz",
         "aliases": ["Oz", "Wizard of Oz"], "notable_for": ["Film"],
         "notable_types": ["Film series"],
         "description": "The Wizard of Oz stories follow the wizard and the witches of the land "
                        "of Oz. Oz the Great and Powerful is a prequel film about the wizard.",
         "domain_properties": {}},
        {"concept_id": "m.07ssc", "name": "United Kingdom",
         "aliases": ["UK", "Britain", "Great Britain"], "notable_for": ["Country"],
         "notable_types": ["Country"],
         "description": "The United Kingdom is a country in Europe. English vineyards in Sussex "
                        "and Kent produce sparkling wine; British exports include whisky.",
         "domain_properties": {"location": "England Scotland Wales Northern Ireland"}},
        {"concept_id": "m.081pw", "name": "Wine",
         "aliases": [], "notable_for": ["Beverage"], "notable_types": ["Food"],
         "description": "Wine is an alcoholic drink made from fermented grape juice. Each "
                        "harvest and vintage shapes the wine; sparkling wine includes champagne.",
         "domain_properties": {}},
        {"concept_id": "m.02wt0", "name": "Australian Open",
         "aliases": [], "notable_for": ["Tennis tournament"],
         "notable_types": ["Sports event"],
         "description": "The Australian Open is a grand slam tennis tournament held in Melbourne "
                        "at Melbourne Park, with finals on Rod Laver Arena.",
         "domain_properties": {}},
        {"concept_id": "m.04ykg", "name": "Novak Djokovic", "aliases": ["Djokovic", "Nole"],
         "notable_for": ["Tennis player"], "notable_types": ["Athlete"],
         "description": "Novak Djokovic is a Serbian tennis player and grand slam champion who "
                        "won the Australian Open final in Melbourne.",
         "domain_properties": {}},
        {"concept_id": "m.05p8n", "name": "Andy Murray", "aliases": ["Murray"],
         "notable_for": ["Tennis player"], "notable_types": ["Athlete"],
         "description": "Andy Murray is a Scottish tennis player, a Scot who reached the "
                        "Australian Open final against Djokovic.",
         "domain_properties": {}},
        {"concept_id": "m.0j7fz", "name": "Fred Rogers", "aliases": ["Mr. Rogers", "Mister Rogers"],
         "notable_for": ["Television host"], "notable_types": ["TV personality"],
         "description": "Fred Rogers hosted the PBS children television program Mister Rogers "
                        "Neighborhood in Pittsburgh, known for his sweater, trolley, puppets "
                        "and kindness.",
         "domain_properties": {"tv": "Mister Rogers Neighborhood; neighbor; land of make believe"}},
        {"concept_id": "m.0d2q2", "name": "Water scarcity", "aliases": ["water shortage"],
         "notable_for": ["Environmental issue"], "notable_types": ["Topic"],
         "description": "Water scarcity is the lack of fresh water supply. Drought, low rainfall "
                        "and falling reservoir levels lead to rationing, and farmers lose "
                        "irrigation.",
         "domain_properties": {}},
        {"concept_id": "m.08wat", "name": "Water", "aliases": [],
         "notable_for": ["Chemical compound"], "notable_types": ["Substance"],
         "description": "Water is a transparent chemical substance essential for life.",
         "domain_properties": {}},
        # Distractors that no fixture query should reach.
        {"concept_id": "m.0k8z", "name": "Apple Inc.", "aliases": ["Apple"],
         "notable_for": ["Company"], "notable_types": ["Business"],
         "description": "Apple designs phones, laptops and software.", "domain_properties": {}},
        {"concept_id": "m.0dl567", "name": "Taylor Swift", "aliases": [],
         "notable_for": ["Singer"], "notable_types": ["Musical artist"],
         "description": "Taylor Swift is a singer and songwriter.", "domain_properties": {}},
        {"concept_id": "m.09c7w0", "name": "United States", "aliases": ["USA", "US", "America"],
         "notable_for": ["Country"], "notable_types": ["Country"],
         "description": "The United States is a country in North America.",
         "domain_properties": {}},
    ]
    (OUT / "concepts.jsonl").write_text(
        "".join(json.dumps(c, sort_keys=True) + "\n" for c in concepts))

    (OUT / "overrides.txt").write_text(
        "# topic concepts chosen by hand\nMB01 m.0c9c0 m.0hgdq\nMB05 m.0d2q2\n")


if __name__ == "__main__":
    main()
