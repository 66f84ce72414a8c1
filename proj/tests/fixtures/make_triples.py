#!/usr/bin/env python3
"""Regenerates triples_100.jsonl: arithmetic word problems with multi-paragraph
reasoning and answers. Deterministic; run from this directory."""

import json
import random

ITEMS = ["apples", "pencils", "marbles", "tickets", "books", "coins", "stamps", "shells"]
NAMES = ["Ana", "Bo", "Chen", "Dara", "Eli", "Femi", "Gus", "Hana", "Ivo", "Jun"]


def triple(i, rng):
    name, item = rng.choice(NAMES), rng.choice(ITEMS)
    a, b, c = rng.randint(3, 40), rng.randint(2, 9), rng.randint(1, 25)
    total = a * b - c
    prompt = (f"{name} buys {b} boxes of {item} with {a} {item} in each box, "
              f"then gives away {c}. How many {item} are left?")
    steps = [
        f"Let me restate the problem. There are {b} boxes and each holds {a} {item}.",
        f"First compute the total: {a} times {b}.\n{a} * {b} = {a * b}.",
        f"Then {name} gives away {c}, so subtract: {a * b} - {c} = {total}.",
    ]
    if rng.random() < 0.5:
        steps.insert(1, "Hmm, I should be careful to multiply before subtracting.")
    if rng.random() < 0.6:
        steps.append(f"Double-check: {total} + {c} = {a * b}, and {a * b} / {b} = {a}. Consistent.")
    answer = [
        f"Each of the {b} boxes holds {a} {item}, so there are {a * b} in total.",
        f"After giving away {c}, {name} has {a * b} - {c} = {total} left.",
    ]
    if rng.random() < 0.5:
        answer.append(f"The answer is \\boxed{{{total}}}.")
    # Some records carry messy spacing to exercise normalization.
    sep = "\n\n" if rng.random() < 0.7 else "\n \n\n"
    return {"id": f"arith-{i:03d}", "prompt": prompt, "reasoning": sep.join(steps), "answer": "\n\n".join(answer)}


def main():
    rng = random.Random(2024)
    with open("triples_100.jsonl", "w", encoding="utf-8") as f:
        for i in range(100):
            f.write(json.dumps(triple(i, rng), ensure_ascii=False) + "\n")


if __name__ == "__main__":
    main()
