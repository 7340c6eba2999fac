#!/usr/bin/env python3
"""Generates the synthetic fixture set under fixtures/.

Three keyword topics with well-separated embeddings, one planted regime shift
in topic A's article rate on 2015-01-01, and a stock series whose daily moves
are correlated with topic A coverage. Deterministic for a fixed seed.
"""

import json
import math
import os
import random

ROOT = os.path.join(os.path.dirname(os.path.abspath(__file__)), "..", "fixtures")
SEED = 20240517
START = (2013, 1, 1)
END = (2016, 12, 31)
SHIFT = "2015-01-01"

TOPIC_WORDS = {
    "A": ["rates", "inflation", "bonds", "yield", "treasury", "fed", "hike", "cut",
          "cpi", "deficit", "stimulus", "quantitative", "easing", "taper", "dovish",
          "hawkish", "liquidity", "recession", "gdp", "unemployment", "payrolls",
          "fomc", "auction", "duration", "curve", "spread", "basispoints", "repo",
          "mortgage", "credit", "default", "downgrade", "rating", "debtceiling",
          "austerity", "bailout", "eurozone", "drachma", "banknotes", "minting"],
    "B": ["election", "senate", "congress", "ballot", "campaign", "caucus", "primary",
          "incumbent", "filibuster", "gerrymander", "lobbying", "superpac", "veto",
          "impeachment", "subpoena", "testimony", "nominee", "confirmation", "recount",
          "turnout", "swingstate", "redistricting", "midterms", "runoff", "delegates",
          "convention", "platform", "endorsement", "debate", "polling", "approval",
          "legislation", "amendment", "statute", "executive", "judiciary", "precedent",
          "docket", "injunction", "plaintiff"],
    "C": ["merger", "acquisition", "ipo", "buyback", "dividend", "earnings", "guidance",
          "revenue", "margin", "forecast", "upgrade", "valuation", "shareholder",
          "proxy", "activist", "spinoff", "divestiture", "antitrust", "regulator",
          "compliance", "audit", "restatement", "writedown", "goodwill", "synergy",
          "layoffs", "restructuring", "pension", "backlog", "inventory", "logistics",
          "supplier", "tariff", "export", "import", "commodity", "futures", "hedging",
          "arbitrage", "derivative"],
}

CENTERS = {
    "A": [4.0, 0.0, 0.0, 1.0, -1.0, 0.5, 0.0, 0.0],
    "B": [0.0, 4.0, 0.0, -1.0, 1.0, 0.0, 0.5, 0.0],
    "C": [0.0, 0.0, 4.0, 0.0, 0.0, -1.0, 0.0, 0.5],
}

SECTIONS = ["business", "economy", "politics", "washington", "world"]
OFF_SECTIONS = ["sports", "style", "travel"]

HEADS = ["Report", "Analysis", "Update", "Outlook", "Briefing", "Review", "Recap",
         "Watch", "Notes", "Summary"]


def daterange(start, end):
    import datetime
    d = datetime.date(*start)
    stop = datetime.date(*end)
    while d <= stop:
        yield d
        d += datetime.timedelta(days=1)


def main():
    rng = random.Random(SEED)
    os.makedirs(ROOT, exist_ok=True)
    import datetime
    shift = datetime.date(2015, 1, 1)

    # ---- corpus ----
    articles = []
    serial = 0
    for day in daterange(START, END):
        rates = {"A": 0.35, "B": 0.30, "C": 0.30}
        if day >= shift:
            rates["A"] = 1.3  # the planted regime change
        for topic, lam in rates.items():
            count = 0
            # poisson via inversion
            p = math.exp(-lam)
            u = rng.random()
            cum = p
            while u > cum:
                count += 1
                p *= lam / count
                cum += p
            for _ in range(count):
                serial += 1
                words = rng.sample(TOPIC_WORDS[topic], rng.randint(3, 6))
                section = rng.choice(SECTIONS)
                headline = f"{rng.choice(HEADS)} {topic}{serial}"
                articles.append((day.isoformat(), headline, section, words))
        # occasional off-section or keyword-free row for the ingest filters
        if rng.random() < 0.03:
            serial += 1
            articles.append((day.isoformat(), f"Filler {serial}", rng.choice(OFF_SECTIONS),
                             rng.sample(TOPIC_WORDS["C"], 3)))
        if rng.random() < 0.02:
            serial += 1
            articles.append((day.isoformat(), f"Empty {serial}", rng.choice(SECTIONS), []))

    with open(os.path.join(ROOT, "corpus.tsv"), "w") as f:
        f.write("date\theadline\tsection\tkeywords\n")
        for date, headline, section, words in articles:
            kws = "[" + ", ".join(f"'{w}'" for w in words) + "]"
            f.write(f"{date}\t{headline}\t{section}\t{kws}\n")

    # ---- embeddings ----
    with open(os.path.join(ROOT, "vectors.tsv"), "w") as f:
        rows = []
        for topic, words in TOPIC_WORDS.items():
            for w in words:
                vec = [c + rng.gauss(0.0, 0.25) for c in CENTERS[topic]]
                rows.append((w, vec))
        rows.sort()
        f.write(f"dim=8 count={len(rows)}\n")
        for w, vec in rows:
            f.write(w + "\t" + " ".join(f"{v:.6f}" for v in vec) + "\n")

    # ---- daily topic-A intensity, for the stock coupling ----
    a_count = {}
    for date, _, section, words in articles:
        if section in OFF_SECTIONS or not words:
            continue
        if any(w in TOPIC_WORDS["A"] for w in words):
            a_count[date] = a_count.get(date, 0) + 1

    closes = []
    price = 100.0
    with open(os.path.join(ROOT, "stock.csv"), "w") as f:
        f.write("date,close\n")
        for day in daterange(START, END):
            if day.weekday() >= 5:
                continue
            base = 1.3 if day >= shift else 0.35
            dev = a_count.get(day.isoformat(), 0) - base
            r = 0.35 * dev + rng.gauss(0.0, 0.6)
            price *= 1.0 + r / 100.0
            f.write(f"{day.isoformat()},{price:.4f}\n")
            closes.append((day.isoformat(), round(price, 4)))

    with open(os.path.join(ROOT, "prices.json"), "w") as f:
        json.dump({"symbol": "SYN",
                   "prices": [{"date": d, "close": c} for d, c in closes[:40]]}, f, indent=1)

    with open(os.path.join(ROOT, "events.txt"), "w") as f:
        f.write("# planted regime change\n")
        f.write(SHIFT + "\n")

    config = {
        "paths": {
            "corpus": "fixtures/corpus.tsv",
            "vectors": "fixtures/vectors.tsv",
            "stock": "fixtures/stock.csv",
            "reference_events": "fixtures/events.txt",
            "output_dir": "run",
        },
        "stock_symbol": "SYN",
        "reducer": "pca",
        "n_components": 5,
        "hdbscan": {"min_cluster_size": 12, "min_samples": 4},
        "top_keywords": 10,
        "labeler": "stub",
        "breakpoint_topic": "auto-variance",
        "breakpoint_tolerance_days": 10,
        "min_segment_span_days": 30,
        "smoothing_window": 1,
        "forecast": {"n_changepoints": 8, "yearly_order": 6, "weekly_order": 2,
                     "ridge_lambda": 0.0001, "auto_seasonality": True},
        "split_proportions": {"train": 0.74, "train_val": 0.04, "test": 0.20,
                              "test_val": 0.02},
    }
    with open(os.path.join(ROOT, "pipeline_config.json"), "w") as f:
        json.dump(config, f, indent=2)
        f.write("\n")

    print(f"{len(articles)} articles, {len(closes)} trading days")


if __name__ == "__main__":
    main()
