// Layout invariants: hitboxes never overlap and every button id appears
// exactly once; gaze hits map points back to the right surfaces.

import { describe, expect, it } from "vitest";

import { STAGE, buttonBoxes, gazeHit, inTablet, type Rect } from "../src/layout.js";

function overlaps(a: Rect, b: Rect): boolean {
  return a.x < b.x + b.w && b.x < a.x + a.w && a.y < b.y + b.h && b.y < a.y + a.h;
}

describe("hitboxes", () => {
  it("button hitboxes are unique and pairwise disjoint", () => {
    for (const released of [0, 1, 3, 6, 24]) {
      const boxes = buttonBoxes(released);
      const ids = boxes.map((b) => b.button);
      expect(new Set(ids).size).toBe(ids.length);
      for (let i = 0; i < boxes.length; i++) {
        for (let j = i + 1; j < boxes.length; j++) {
          expect(overlaps(boxes[i].rect, boxes[j].rect)).toBe(false);
        }
      }
    }
  });

  it("buttons never overlap panels or the tablet", () => {
    const panels = [STAGE.slides, STAGE.transcripts, STAGE.notes, STAGE.tablet];
    for (const box of buttonBoxes(24)) {
      for (const panel of panels) {
        expect(overlaps(box.rect, panel)).toBe(false);
      }
    }
  });

  it("thumb strip shows at most six most-recent builds", () => {
    const boxes = buttonBoxes(24).filter((b) => b.button.startsWith("slide_thumb:"));
    expect(boxes).toHaveLength(6);
    const indices = boxes.map((b) => parseInt(b.button.split(":")[1], 10)).sort((a, b) => a - b);
    expect(indices).toEqual([18, 19, 20, 21, 22, 23]);
  });
});

describe("gaze mapping", () => {
  it("panel centers hit their surfaces with local coordinates", () => {
    const cx = STAGE.slides.x + STAGE.slides.w / 2;
    const cy = STAGE.slides.y + STAGE.slides.h / 2;
    const hit = gazeHit(cx, cy, 1)!;
    expect(hit.surface).toBe("slides");
    expect(hit.pos[0]).toBeCloseTo(0.5);
    expect(hit.pos[1]).toBeCloseTo(0.5);
  });

  it("tablet region is not a gaze surface", () => {
    const cx = STAGE.tablet.x + STAGE.tablet.w / 2;
    const cy = STAGE.tablet.y + STAGE.tablet.h / 2;
    expect(inTablet(cx, cy)).toBe(true);
    expect(gazeHit(cx, cy, 1)).toBeNull();
  });

  it("button boxes are gaze surfaces", () => {
    const live = buttonBoxes(1).find((b) => b.button === "slides_live")!;
    const hit = gazeHit(live.rect.x + live.rect.w / 2, live.rect.y + live.rect.h / 2, 1)!;
    expect(hit.surface).toBe("button:slides_live");
  });
});
