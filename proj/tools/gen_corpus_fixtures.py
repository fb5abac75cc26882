#!/usr/bin/env python3
"""Writes the corpus fixtures under tests/fixtures/.

drop_100.json         100 answerable DROP-layout questions plus 3 unanswerable ones
drop_100.expected.json  answer-type counts tallied while building the file
squad_small.json      a few SQuAD v1.1-layout questions
truncation_100.jsonl  100 corpus records, exactly 4 inputs over 512 tokens
                      (no digits in inputs, so word and digit-token counts agree)
truncation_100.expected.json
"""
import json
import os
import random
import re

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
FIX = os.path.join(ROOT, "tests", "fixtures")

MONTHS = ["January", "February", "March", "April", "May", "June", "July",
          "August", "September", "October", "November", "December"]
NAMES = ["Kasay", "Delhomme", "Brady", "Moss", "Welker", "Manning", "Rice", "Gore",
         "Smith", "Peterson", "Jones", "Ward"]
NOUNS = ["touchdown", "field goal", "interception", "fumble", "punt", "safety"]


def empty_date():
    return {"day": "", "month": "", "year": ""}


def answer(kind, rng):
    if kind == "number":
        return {"number": str(rng.randint(1, 9999)), "spans": [], "date": empty_date()}
    if kind == "date":
        d = {"day": str(rng.randint(1, 28)), "month": rng.choice(MONTHS), "year": str(rng.randint(1900, 2020))}
        if rng.random() < 0.3:
            d["day"] = ""
        return {"number": "", "spans": [], "date": d}
    if kind == "span":
        return {"number": "", "spans": [rng.choice(NAMES)], "date": empty_date()}
    k = rng.randint(2, 4)
    return {"number": "", "spans": rng.sample(NAMES, k), "date": empty_date()}


def drop_fixture():
    rng = random.Random(20240611)
    kinds = ["number"] * 52 + ["span"] * 28 + ["spans"] * 13 + ["date"] * 7
    rng.shuffle(kinds)
    counts = {"number": 0, "span": 0, "spans": 0, "date": 0}
    doc = {}
    q = 0
    for p in range(20):
        pid = "nfl_%04d" % p
        passage = " ".join(rng.choice(NAMES) + " scored a " + rng.choice(NOUNS) + "." for _ in range(6))
        pairs = []
        for _ in range(5):
            kind = kinds[q]
            counts[kind] += 1
            qa = {
                "question": "Question %d about %s?" % (q, pid),
                "answer": answer(kind, rng),
                "query_id": "q%03d" % q,
                "validated_answers": [],
            }
            if rng.random() < 0.4:
                qa["validated_answers"].append(answer(rng.choice(["number", "span", "date"]), rng))
            pairs.append(qa)
            q += 1
        doc[pid] = {"passage": passage, "qa_pairs": pairs}
    # unanswerable pairs: every annotation empty
    blank = {"number": "", "spans": [], "date": empty_date()}
    doc["nfl_0003"]["qa_pairs"].append({"question": "Blank?", "answer": blank, "query_id": "blank-1"})
    doc["nfl_0007"]["qa_pairs"].append(
        {"question": "Blank again?", "answer": blank, "query_id": "blank-2", "validated_answers": [blank]})
    doc["nfl_0011"]["qa_pairs"].append({"question": "No answer key?", "answer": {}, "query_id": "blank-3"})

    with open(os.path.join(FIX, "drop_100.json"), "w", encoding="utf-8") as f:
        json.dump(doc, f, indent=1)
        f.write("\n")
    with open(os.path.join(FIX, "drop_100.expected.json"), "w", encoding="utf-8") as f:
        json.dump({"questions": q, "skipped": 3, "counts": counts}, f, indent=1)
        f.write("\n")


def squad_fixture():
    doc = {"version": "1.1", "data": [
        {"title": "Denver_Broncos", "paragraphs": [
            {"context": "The Broncos defeated the Panthers 24 to 10 in Super Bowl 50.",
             "qas": [
                 {"id": "sq-1", "question": "Who won Super Bowl 50?",
                  "answers": [{"answer_start": 4, "text": "Broncos"}, {"answer_start": 0, "text": "The Broncos"}]},
                 {"id": "sq-2", "question": "How many points did the Panthers score?",
                  "answers": [{"answer_start": 43, "text": "10"}]},
             ]},
        ]},
        {"title": "Nikola_Tesla", "paragraphs": [
            {"context": "Tesla was born on 10 July 1856 in Smiljan.",
             "qas": [
                 {"id": "sq-3", "question": "Where was Tesla born?",
                  "answers": [{"answer_start": 34, "text": "Smiljan"}]},
                 {"id": "sq-4", "question": "When was Tesla born?",
                  "answers": [{"answer_start": 18, "text": "10 July 1856"}]},
             ]},
        ]},
    ]}
    with open(os.path.join(FIX, "squad_small.json"), "w", encoding="utf-8") as f:
        json.dump(doc, f, indent=1)
        f.write("\n")


TOKEN = re.compile(r"\d|(?<=\d)\.(?=\d)|(?:(?!\d)(?!(?<=\d)\.(?=\d)).)+")


def count_tokens(text):
    return sum(len(TOKEN.findall(chunk)) for chunk in text.split())


def truncation_fixture():
    rng = random.Random(7)
    words = ["the", "team", "scored", "yards", "after", "drive", "quarter", "pass"]
    over = {10: 513, 37: 514, 64: 600, 91: 900}
    lines = []
    enc_over = dec_over = 0
    for i in range(100):
        target_len = over.get(i, rng.choice([20, 100, 300, 511, 512]))
        question = "How many yards were gained on the %s play?" % rng.choice(["first", "second", "last"])
        prefix = "answer_me: %s context:" % question
        filler = []
        text = prefix
        while count_tokens(text) < target_len:
            filler.append(rng.choice(words))
            text = prefix + " " + " ".join(filler)
        # no digits in inputs, so word and digit-token counts agree
        assert count_tokens(text) == len(text.split()) == target_len, (i, target_len)
        target = str(rng.randint(1, 500))
        if i in (5, 50):
            target = " ".join(["Brady"] * 55)  # 55 decoder tokens
        enc_over += count_tokens(text) > 512
        dec_over += count_tokens(target) > 54
        lines.append(json.dumps({"input": text, "target": target, "task": "answer_me",
                                 "answer_type": "number" if target.isdigit() else "spans",
                                 "source_id": "trunc-%03d" % i}))
    with open(os.path.join(FIX, "truncation_100.jsonl"), "w", encoding="utf-8") as f:
        f.write("\n".join(lines) + "\n")
    with open(os.path.join(FIX, "truncation_100.expected.json"), "w", encoding="utf-8") as f:
        json.dump({"total": 100, "encoder_cutoff_count": enc_over, "decoder_cutoff_count": dec_over}, f, indent=1)
        f.write("\n")


if __name__ == "__main__":
    drop_fixture()
    squad_fixture()
    truncation_fixture()
    print("fixtures written to", FIX)
