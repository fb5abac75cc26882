#!/usr/bin/env python3
"""Writes tests/fixtures/eval_official_cases.json from the vendored DROP scorer.

Each case holds a prediction, its gold answers (DROP answer JSON), and the
scores produced by the official code: rounded F1 as the leaderboard reports
it, the unrounded F1, EM, and the answer type that set the maximum.
"""
import json
import os
import sys

import numpy as np

HERE = os.path.dirname(os.path.abspath(__file__))
ROOT = os.path.dirname(HERE)
sys.path.insert(0, os.path.join(ROOT, "tests", "fixtures", "tools"))
import drop_eval as official  # noqa: E402

DELIM = "; "


def num(n):
    return {"number": n, "spans": [], "date": {"day": "", "month": "", "year": ""}}


def spans(*s):
    return {"number": "", "spans": list(s), "date": {"day": "", "month": "", "year": ""}}


def date(day="", month="", year=""):
    return {"number": "", "spans": [], "date": {"day": day, "month": month, "year": year}}


CASES = [
    # single spans
    ("John Kasay", [spans("John Kasay")]),
    ("Kasay", [spans("John Kasay")]),
    ("john kasay!", [spans("John Kasay")]),
    ("The Untitled (1981) painting", [spans("Untitled (1981) painting")]),
    ("the Panthers", [spans("Panthers")]),
    ("a touchdown pass", [spans("touchdown pass")]),
    ("Carolina Panthers", [spans("Panthers")]),
    ("field goal", [spans("touchdown")]),
    ("", [spans("touchdown")]),
    ("well-known author", [spans("well known author")]),
    ("Jake Delhomme's pass", [spans("Delhomme")]),
    ("an apple and the pear", [spans("apple pear")]),
    ("the the the", [spans("the")]),
    ("Anne", [spans("an")]),
    ("U.S.", [spans("US")]),
    ("St. Louis Rams", [spans("St Louis Rams")]),
    ("Tom Brady, Randy Moss", [spans("Tom Brady")]),
    # numbers
    ("4300000", [num("4300000")]),
    ("4,300,000", [num("4300000")]),
    ("4300000.0", [num("4300000")]),
    ("12", [num("12")]),
    ("12.0", [num("12")]),
    ("12.5", [num("12.50")]),
    ("13 million", [spans("12 million")]),
    ("12 million", [spans("12 million")]),
    ("12 millions", [spans("12 million")]),
    ("13", [num("12")]),
    ("-5", [num("5")]),
    ("5 yards", [num("5")]),
    ("about 5", [num("5")]),
    ("1e3", [num("1000")]),
    ("0.00001", [num("0.00001")]),
    ("10000000000000000", [num("1e16")]),
    ("1_000", [num("1000")]),
    ("$1,000", [num("1000")]),
    ("33%", [num("33")]),
    ("seven", [num("7")]),
    ("3.5", [num("3.50")]),
    ("07", [num("7")]),
    ("1. 5", [num("1.5")]),
    # dates
    ("16 November 1975", [date("16", "November", "1975")]),
    ("November 16, 1975", [date("16", "November", "1975")]),
    ("1975", [date("", "", "1975")]),
    ("1976", [date("", "", "1975")]),
    ("November 1975", [date("", "November", "1975")]),
    ("1975 November", [date("16", "November", "1975")]),
    ("March", [date("", "March", "")]),
    # multi-span
    ("Tom Brady; Randy Moss", [spans("Tom Brady", "Randy Moss")]),
    ("Randy Moss; Tom Brady", [spans("Tom Brady", "Randy Moss")]),
    ("Tom Brady", [spans("Tom Brady", "Randy Moss")]),
    ("Tom Brady; Randy Moss; Wes Welker", [spans("Tom Brady", "Randy Moss")]),
    ("Brady; Moss", [spans("Tom Brady", "Randy Moss")]),
    ("Moss; Tom", [spans("Tom Brady", "Randy Moss")]),
    ("Tom Brady, Randy Moss", [spans("Tom Brady", "Randy Moss")]),
    ("12; 14", [spans("12", "14")]),
    ("14; 13", [spans("12", "14")]),
    ("12 yards; 14 yards", [spans("12", "14")]),
    ("Cleveland; Pittsburgh; Cincinnati", [spans("Cleveland", "Pittsburgh", "Baltimore")]),
    ("a; b; c; d; e; f; g; h; i; j", [spans("b", "d", "f", "h", "j", "k", "l", "m", "n")]),
    # multiple golds
    ("4300000", [spans("12 million"), num("4300000")]),
    ("12 million", [spans("12 million"), num("4300000")]),
    ("Kasay", [spans("Jake Delhomme"), spans("John Kasay")]),
    ("John Kasay", [spans("Kasay"), spans("John Kasay")]),
    ("John", [spans("John Kasay"), spans("John")]),
    ("2 yards", [num("2"), spans("2 yards")]),
    ("16 November", [date("16", "November", "1975"), spans("16 November")]),
    ("Delhomme", [num("3"), spans("Jake Delhomme"), spans("Delhomme")]),
    ("touchdown", [spans(" "), spans("touchdown")]),
    ("nothing", [spans("first quarter"), num("7")]),
    ("", [num("7"), spans("first quarter")]),
    # gate with mixed content
    ("Patriots 24", [spans("Patriots 21")]),
    ("24 Patriots", [spans("Patriots 24")]),
    ("the 1st quarter", [spans("first quarter")]),
    ("1st quarter", [spans("1st quarter")]),
    ("2-yard run", [spans("2 yard run")]),
    ("inf", [num("inf")]),
    ("nan", [num("nan")]),
    ("10 and 20", [spans("20 and 10")]),
    ("20", [spans("10 and 20")]),
]


def raw_metrics(predicted, gold):
    pred_bags = official._answer_to_bags(predicted)
    gold_bags = official._answer_to_bags(gold)
    em = 1.0 if set(pred_bags[0]) == set(gold_bags[0]) and len(pred_bags[0]) == len(gold_bags[0]) else 0.0
    return em, float(np.mean(official._align_bags(pred_bags[1], gold_bags[1])))


def evaluate(prediction, golds, metric):
    predicted = prediction.split(DELIM) if DELIM in prediction else prediction
    max_em, max_f1, max_type = 0.0, 0.0, None
    for answer in golds:
        gold, gold_type = official.answer_json_to_strings(answer)
        em, f1 = metric(predicted, gold)
        if gold[0].strip() != "":
            max_em = max(max_em, em)
            max_f1 = max(max_f1, f1)
            if max_em == em and max_f1 == f1:
                max_type = gold_type
    return max_em, float(max_f1), max_type


def main():
    out = []
    for i, (prediction, golds) in enumerate(CASES):
        em, f1, typ = evaluate(prediction, golds, official.get_metrics)
        em_raw, f1_raw, typ_raw = evaluate(prediction, golds, raw_metrics)
        out.append({
            "id": "case-%03d" % i,
            "prediction": prediction,
            "answers": golds,
            "em": em,
            "f1": f1,
            "type": typ,
            "em_raw": em_raw,
            "f1_raw": f1_raw,
            "type_raw": typ_raw,
        })
    path = os.path.join(ROOT, "tests", "fixtures", "eval_official_cases.json")
    with open(path, "w", encoding="utf-8") as f:
        json.dump(out, f, indent=1, ensure_ascii=False)
        f.write("\n")
    print("wrote %d cases to %s" % (len(out), path))


if __name__ == "__main__":
    main()
