"""Regenerates detections.csv: 50 sketches, 220 elements, fixed class totals.

Usage: python3 generate.py > detections.csv
"""

import random

COUNTS = {
    0: 17,  # heading
    1: 34,  # checkbox
    2: 28,  # radio
    3: 12,  # selectbox
    4: 29,  # label
    5: 20,  # link
    6: 19,  # button
    7: 22,  # image
    8: 10,  # paragraph
    9: 29,  # textbox
}
SKETCHES = 50
SIZES = {
    0: (360, 60),
    1: (40, 40),
    2: (40, 40),
    3: (260, 50),
    4: (160, 40),
    5: (140, 36),
    6: (160, 56),
    7: (300, 220),
    8: (600, 120),
    9: (300, 50),
}

rng = random.Random(20190815)
pool = [cls for cls, n in COUNTS.items() for _ in range(n)]
rng.shuffle(pool)

# Every sketch gets at least two elements; the rest are spread at random.
per_sketch = [2] * SKETCHES
for _ in range(len(pool) - 2 * SKETCHES):
    per_sketch[rng.randrange(SKETCHES)] += 1

print("# file,x_min,y_min,x_max,y_max,class_id,confidence")
at = 0
for s, n in enumerate(per_sketch):
    name = f"sketches/test/s{s + 1:02d}.jpg"
    y = 40
    classes = pool[at : at + n]
    at += n
    i = 0
    while i < len(classes):
        # Up to three elements side by side, never overlapping.
        row = classes[i : i + rng.randint(1, 3)]
        i += len(row)
        x = 40
        height = 0
        for cls in row:
            w, h = SIZES[cls]
            w += rng.randint(-10, 10)
            h += rng.randint(-4, 4)
            conf = round(rng.uniform(0.55, 0.99), 2)
            print(f"{name},{x},{y},{x + w},{y + h},{cls},{conf}")
            x += w + rng.randint(30, 60)
            height = max(height, h)
        y += height + rng.randint(30, 50)
