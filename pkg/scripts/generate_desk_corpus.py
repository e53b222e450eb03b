"""Generate the bundled desk-scale corpora (Java + Python).

Each record family pairs a query phrasing with a code shape; identifiers and
literals are randomized per record so the code-token vocabulary is wide while
the tree-summary vocabulary stays bounded by the grammar.

Run from the repository root:
    python3 scripts/generate_desk_corpus.py
"""

import json
import random
from pathlib import Path

OUT_DIR = Path(__file__).resolve().parent.parent / "src" / "astsearch" / "data"

STEMS = ["count", "total", "value", "item", "data", "result", "index", "buffer",
         "limit", "offset", "size", "sum", "entry", "score", "weight", "node",
         "key", "flag", "cursor", "amount", "price", "delta", "bound", "cache"]
SUFFIXES = ["", "Val", "Num", "Acc", "Tmp", "Cur", "Ref", "Buf", "Arg", "Out"]

WORDS = ["alpha", "omega", "delta", "sigma", "token", "probe", "batch", "chunk",
         "frame", "trace", "shard", "route", "label", "theme", "tuple", "curve"]


def make_name(rng: random.Random, used: set[str]) -> str:
    while True:
        name = rng.choice(STEMS) + rng.choice(SUFFIXES) + str(rng.randint(0, 99))
        if name not in used:
            used.add(name)
            return name


def java_families():
    def sum_two(rng, n):
        a, b = n(), n()
        m = n()
        return (f"returns the sum of {a} and {b}",
                f"int {m}(int {a}, int {b}) {{\n    return {a} + {b};\n}}")

    def max_two(rng, n):
        a, b, m = n(), n(), n()
        return (f"finds the larger of {a} and {b} with a comparison",
                f"int {m}(int {a}, int {b}) {{\n    if ({a} > {b}) {{\n        return {a};\n"
                f"    }} else {{\n        return {b};\n    }}\n}}")

    def array_sum(rng, n):
        arr, acc, i, m = n(), n(), n(), n()
        return (f"adds up all elements of the array {arr} with a loop",
                f"int {m}(int[] {arr}) {{\n    int {acc} = 0;\n"
                f"    for (int {i} = 0; {i} < {arr}.length; {i}++) {{\n"
                f"        {acc} += {arr}[{i}];\n    }}\n    return {acc};\n}}")

    def count_matches(rng, n):
        arr, tgt, acc, i, m = n(), n(), n(), n(), n()
        return (f"counts how many entries of {arr} equal {tgt}",
                f"int {m}(int[] {arr}, int {tgt}) {{\n    int {acc} = 0;\n"
                f"    for (int {i} = 0; {i} < {arr}.length; {i}++) {{\n"
                f"        if ({arr}[{i}] == {tgt}) {{\n            {acc}++;\n        }}\n"
                f"    }}\n    return {acc};\n}}")

    def null_guard(rng, n):
        s, m = n(), n()
        word = rng.choice(WORDS)
        return (f"returns a default text when {s} is null",
                f"String {m}(String {s}) {{\n    if ({s} == null) {{\n"
                f"        return \"{word}\";\n    }}\n    return {s};\n}}")

    def concat(rng, n):
        a, b, m = n(), n(), n()
        sep = rng.choice([",", ";", "-", ":", "|"])
        return (f"joins {a} and {b} with a separator",
                f"String {m}(String {a}, String {b}) {{\n"
                f"    return {a} + \"{sep}\" + {b};\n}}")

    def clamp(rng, n):
        v, lo, hi, m = n(), n(), n(), n()
        return (f"limits {v} to lie between {lo} and {hi}",
                f"int {m}(int {v}, int {lo}, int {hi}) {{\n"
                f"    if ({v} < {lo}) {{\n        return {lo};\n    }}\n"
                f"    if ({v} > {hi}) {{\n        return {hi};\n    }}\n"
                f"    return {v};\n}}")

    def average(rng, n):
        arr, acc, i, m = n(), n(), n(), n()
        return (f"computes the mean of the values in {arr}",
                f"double {m}(int[] {arr}) {{\n    double {acc} = 0.0;\n"
                f"    for (int {i} = 0; {i} < {arr}.length; {i}++) {{\n"
                f"        {acc} += {arr}[{i}];\n    }}\n"
                f"    return {acc} / {arr}.length;\n}}")

    def in_range(rng, n):
        v, lo, hi, m = n(), n(), n(), n()
        return (f"checks whether {v} lies inside the range {lo} to {hi}",
                f"boolean {m}(int {v}, int {lo}, int {hi}) {{\n"
                f"    return ({v} >= {lo}) && ({v} <= {hi});\n}}")

    def find_index(rng, n):
        arr, tgt, i, m = n(), n(), n(), n()
        return (f"locates the position of {tgt} inside {arr}",
                f"int {m}(int[] {arr}, int {tgt}) {{\n    int {i} = 0;\n"
                f"    while ({i} < {arr}.length) {{\n"
                f"        if ({arr}[{i}] == {tgt}) {{\n            return {i};\n        }}\n"
                f"        {i}++;\n    }}\n    return -1;\n}}")

    def factorial(rng, n):
        v, acc, i, m = n(), n(), n(), n()
        return (f"multiplies the numbers from one up to {v}",
                f"long {m}(int {v}) {{\n    long {acc} = 1;\n"
                f"    for (int {i} = 1; {i} <= {v}; {i}++) {{\n"
                f"        {acc} = {acc} * {i};\n    }}\n    return {acc};\n}}")

    def power(rng, n):
        base, exp, acc, i, m = n(), n(), n(), n(), n()
        return (f"raises {base} to the power {exp} by repeated multiplication",
                f"int {m}(int {base}, int {exp}) {{\n    int {acc} = 1;\n"
                f"    for (int {i} = 0; {i} < {exp}; {i}++) {{\n"
                f"        {acc} = {acc} * {base};\n    }}\n    return {acc};\n}}")

    def min_array(rng, n):
        arr, best, i, m = n(), n(), n(), n()
        return (f"finds the smallest element of {arr}",
                f"int {m}(int[] {arr}) {{\n    int {best} = {arr}[0];\n"
                f"    for (int {i} = 1; {i} < {arr}.length; {i}++) {{\n"
                f"        if ({arr}[{i}] < {best}) {{\n            {best} = {arr}[{i}];\n"
                f"        }}\n    }}\n    return {best};\n}}")

    def scale(rng, n):
        v, f_, m = n(), n(), n()
        k = rng.randint(2, 97)
        return (f"scales {v} by the constant factor {k}",
                f"int {m}(int {v}, int {f_}) {{\n    return {v} * {f_} + {k};\n}}")

    def abs_diff(rng, n):
        a, b, m = n(), n(), n()
        return (f"computes the absolute difference between {a} and {b}",
                f"int {m}(int {a}, int {b}) {{\n    if ({a} > {b}) {{\n"
                f"        return {a} - {b};\n    }}\n    return {b} - {a};\n}}")

    return [sum_two, max_two, array_sum, count_matches, null_guard, concat, clamp,
            average, in_range, find_index, factorial, power, min_array, scale, abs_diff]


def python_families():
    def sum_two(rng, n):
        a, b, m = n(), n(), n()
        return (f"returns the sum of {a} and {b}",
                f"def {m}({a}, {b}):\n    return {a} + {b}\n")

    def max_two(rng, n):
        a, b, m = n(), n(), n()
        return (f"finds the larger of {a} and {b}",
                f"def {m}({a}, {b}):\n    if {a} > {b}:\n        return {a}\n"
                f"    return {b}\n")

    def total(rng, n):
        xs, acc, x, m = n(), n(), n(), n()
        return (f"adds up the values in {xs}",
                f"def {m}({xs}):\n    {acc} = 0\n    for {x} in {xs}:\n"
                f"        {acc} = {acc} + {x}\n    return {acc}\n")

    def count_matches(rng, n):
        xs, tgt, acc, x, m = n(), n(), n(), n(), n()
        return (f"counts entries of {xs} equal to {tgt}",
                f"def {m}({xs}, {tgt}):\n    {acc} = 0\n    for {x} in {xs}:\n"
                f"        if {x} == {tgt}:\n            {acc} += 1\n    return {acc}\n")

    def none_guard(rng, n):
        s, m = n(), n()
        word = rng.choice(WORDS)
        return (f"returns a default text when {s} is missing",
                f"def {m}({s}):\n    if {s} is None:\n        return \"{word}\"\n"
                f"    return {s}\n")

    def in_range(rng, n):
        v, lo, hi, m = n(), n(), n(), n()
        return (f"checks whether {v} lies between {lo} and {hi}",
                f"def {m}({v}, {lo}, {hi}):\n    return ({v} >= {lo}) and ({v} <= {hi})\n")

    return [sum_two, max_two, total, count_matches, none_guard, in_range]


def generate(families, count: int, lang: str, seed: int) -> list[dict]:
    rng = random.Random(seed)
    records = []
    for idx in range(count):
        family = families[idx % len(families)]
        used: set[str] = set()
        query, code = family(rng, lambda: make_name(rng, used))
        records.append({"id": f"{lang}-{idx:03d}", "query": query, "code": code,
                        "lang": lang, "split": ""})
    rng.shuffle(records)
    n_train = int(count * 0.7)
    n_valid = int(count * 0.15)
    for i, r in enumerate(records):
        r["split"] = "train" if i < n_train else ("valid" if i < n_train + n_valid else "test")
    records.sort(key=lambda r: r["id"])
    return records


def main():
    OUT_DIR.mkdir(parents=True, exist_ok=True)
    java = generate(java_families(), 100, "java", seed=20240901)
    python = generate(python_families(), 18, "python", seed=20240902)
    for name, rows in (("desk_corpus_java.jsonl", java), ("desk_corpus_python.jsonl", python)):
        with open(OUT_DIR / name, "w", encoding="utf-8", newline="\n") as f:
            for row in rows:
                f.write(json.dumps(row, ensure_ascii=False) + "\n")
        print(f"wrote {len(rows)} records to {OUT_DIR / name}")


if __name__ == "__main__":
    main()
