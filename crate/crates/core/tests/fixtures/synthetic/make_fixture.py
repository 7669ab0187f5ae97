"""Generates the seeded 200-tweet synthetic corpus and its case counts.

Output: tweets.jsonl, cases.csv. Re-running reproduces the files exactly.
"""
import csv
import datetime as dt
import json
import random

SEED = 20211
COUNTRIES = ["AU", "IN", "JP", "BR", "ID", None]
COUNTRY_WEIGHTS = [5, 5, 3, 3, 3, 1]

FRAGMENTS = [
    "good news the vaccine works",
    "so much hope for the rollout",
    "thanks to all the nurses",
    "grateful for my second dose",
    "pray for the families",
    "stay safe everyone",
    "this will never end",
    "the mandates are pointless",
    "worried about side effects",
    "scared of the new variant",
    "my uncle died last week",
    "heartbreaking news from the hospital",
    "covidiots everywhere",
    "stupid antivaxxers again",
    "the whole thing is a hoax",
    "its a scam and a plandemic",
    "ministry update on vaccination numbers",
    "official cases reported today",
    "wow did not expect that",
    "omg look at the queue",
    "lol imagine refusing the jab",
    "haha the memes are great",
    "booked my covid19 vaccine appointment",
    "waiting for the pfizer shipment",
    "the clinic was busy",
    "terrible day at the clinic",
    "a great effort by the team",
    "bad planning by the government",
    "happy to be fully vaccinated",
    "sad to see the hesitancy",
]
NOISE_PREFIX = ["", "", "", "RT @newsdesk: ", "@friend ", "OMG ", "tbh "]
NOISE_SUFFIX = ["", "", "", " https://t.co/abc123", " #covid19vax", " #SocialDistance",
                " 😊", " ☹", " 💉", "!!!", " fwiw", " dm me", " 🙂🙂"]


def main():
    rng = random.Random(SEED)
    start = dt.datetime(2020, 3, 1, tzinfo=dt.timezone.utc)
    span = int((dt.datetime(2021, 8, 1, tzinfo=dt.timezone.utc) - start).total_seconds())
    rows = []
    for i in range(199):
        k = rng.choices([1, 2, 3], weights=[5, 4, 1])[0]
        body = " and ".join(rng.sample(FRAGMENTS, k))
        if rng.random() < 0.3:
            body = body.capitalize()
        text = rng.choice(NOISE_PREFIX) + body + rng.choice(NOISE_SUFFIX)
        ts = start + dt.timedelta(seconds=rng.randrange(span))
        rows.append({
            "id": f"syn-{i:04d}",
            "created_at": ts.strftime("%Y-%m-%dT%H:%M:%SZ"),
            "country": rng.choices(COUNTRIES, weights=COUNTRY_WEIGHTS)[0],
            "text": text,
        })
    rows.append({
        "id": "syn-annoyed-denial",
        "created_at": "2021-02-14T09:30:00Z",
        "country": "IN",
        "text": "Covidiots pushing the hoax again https://t.co/zzz",
    })
    with open("tweets.jsonl", "w", encoding="utf-8") as f:
        for row in rows:
            f.write(json.dumps(row, ensure_ascii=False) + "\n")

    months = []
    y, m = 2020, 3
    while (y, m) <= (2021, 7):
        months.append(f"{y:04d}-{m:02d}")
        y, m = (y + 1, 1) if m == 12 else (y, m + 1)
    with open("cases.csv", "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["country", "month", "new_cases"])
        for c in ["AU", "IN", "JP", "BR", "ID"]:
            for month in months:
                w.writerow([c, month, rng.randrange(0, 500000)])


if __name__ == "__main__":
    main()
