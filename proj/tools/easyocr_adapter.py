#!/usr/bin/env python3
"""Example OCR adapter: PNG on stdin, JSON array of {text, confidence} on stdout.

Wire this up as the subprocess OCR engine:

    {"ocr": {"command": "python3 tools/easyocr_adapter.py"}}

Uses EasyOCR when installed; any engine that honors the same contract works.
"""

import json
import sys


def main() -> int:
    png = sys.stdin.buffer.read()
    try:
        import easyocr
    except ImportError:
        sys.stderr.write("easyocr is not installed (pip install easyocr)\n")
        return 1

    reader = easyocr.Reader(["en"], gpu=False, verbose=False)
    lines = [
        {"text": text, "confidence": float(confidence)}
        for _box, text, confidence in reader.readtext(png)
    ]
    json.dump(lines, sys.stdout)
    sys.stdout.write("\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
