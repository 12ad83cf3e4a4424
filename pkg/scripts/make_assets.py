#!/usr/bin/env python3
"""Generate the visual assets for the bundled courses.

Problems are presented visually (animated command-prompt windows and
input/output pair tables) so the statement cannot be copied into a
prompt.  Re-run after editing course content:

    python scripts/make_assets.py
"""

from pathlib import Path

from PIL import Image, ImageDraw, ImageFont

ROOT = Path(__file__).resolve().parent.parent
COURSES = ROOT / "courses"

BG = (18, 22, 28)
CHROME = (48, 54, 62)
TEXT = (222, 226, 230)
PROMPT = (120, 200, 120)
OUTPUT = (120, 180, 240)
FONT = ImageFont.load_default()


def term_frame(size, lines, cursor=False):
    img = Image.new("RGB", size, BG)
    draw = ImageDraw.Draw(img)
    draw.rectangle([0, 0, size[0], 18], fill=CHROME)
    for i, r in enumerate((196, 160, 90)):
        draw.ellipse([8 + i * 14, 6, 16 + i * 14, 14], fill=(r, 80, 70))
    y = 28
    for color, text in lines:
        draw.text((10, y), text, fill=color, font=FONT)
        y += 14
    if cursor and lines:
        color, text = lines[-1]
        width = draw.textlength(text, font=FONT)
        draw.rectangle([10 + width + 2, y - 14, 10 + width + 8, y - 3], fill=TEXT)
    return img


def terminal_gif(path, typed, output_lines, prelude="", size=(340, 150)):
    """Animate typing `typed` at a $ prompt, then print the output lines."""
    frames = []
    base = [(PROMPT, "$ python3 program.py")]
    if prelude:
        base.append((TEXT, prelude))

    shown = ""
    frames.append(term_frame(size, base + [(TEXT, shown)], cursor=True))
    for ch in typed:
        shown += ch
        frames.append(term_frame(size, base + [(TEXT, shown)], cursor=True))
    final = base + [(TEXT, shown)] + [(OUTPUT, line) for line in output_lines]
    for _ in range(10):
        frames.append(term_frame(size, final))

    path.parent.mkdir(parents=True, exist_ok=True)
    frames[0].save(
        path,
        save_all=True,
        append_images=frames[1:],
        duration=180,
        loop=0,
    )
    print(f"wrote {path.relative_to(ROOT)} ({len(frames)} frames)")


def pairs_png(path, header, pairs, size=(340, 170)):
    """Static table of input -> output example pairs."""
    img = Image.new("RGB", size, BG)
    draw = ImageDraw.Draw(img)
    draw.text((10, 8), header, fill=TEXT, font=FONT)
    y = 32
    for left, right in pairs:
        draw.text((10, y), left, fill=PROMPT, font=FONT)
        draw.text((200, y), "->", fill=TEXT, font=FONT)
        draw.text((224, y), right, fill=OUTPUT, font=FONT)
        y += 18
    path.parent.mkdir(parents=True, exist_ok=True)
    img.save(path)
    print(f"wrote {path.relative_to(ROOT)}")


def main():
    week2 = COURSES / "cs1-week2"

    # hello: the prompt text is part of the program's stdout, which is why
    # the animation shows it on the same line as the greeting.
    terminal_gif(
        week2 / "hello" / "assets" / "demo.gif",
        typed="Sarah",
        output_lines=["Hello Sarah"],
        prelude="Enter your name: ",
    )

    terminal_gif(
        week2 / "ages" / "assets" / "demo.gif",
        typed="36",
        output_lines=["Adult"],
    )
    pairs_png(
        week2 / "ages" / "assets" / "pairs.png",
        "input (age)",
        [("7", "Child"), ("13", "Teenager"), ("19", "Teenager"), ("36", "Adult"), ("65", "Senior")],
    )

    terminal_gif(
        week2 / "judges" / "assets" / "demo.gif",
        typed="8.0 9.5 7.5 6.0 9.0",
        output_lines=["8.17"],
    )
    pairs_png(
        week2 / "judges" / "assets" / "pairs.png",
        "inputs (five scores)",
        [
            ("2.0 3.0 3.0 3.0 4.0", "3.0"),
            ("8.0 9.5 7.5 6.0 9.0", "8.17"),
            ("4.0 6.5 8.0 7.0 6.0", "6.5"),
        ],
    )

    pairs_png(
        COURSES / "functions-demo" / "counter" / "assets" / "pairs.png",
        "counter(values)",
        [
            ("[0, 1, 0, 2, 0, 3]", "3"),
            ("[1, 2, 3]", "0"),
            ("[0, 0, 0, 0]", "4"),
            ("[]", "0"),
        ],
    )


if __name__ == "__main__":
    main()
