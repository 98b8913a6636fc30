// Browser bootstrap: two logical connections (headset + tablet), pointer
// and keyboard capture, render loop. See docs/simulator.md for the keys.

import { InputMapper } from "./input.js";
import { Painter, type FlashState } from "./paint.js";
import { control, type BundleInfo, type InputEvent } from "./protocol.js";
import { buildRenderModel } from "./render.js";
import { Connection } from "./net.js";

const FLASH_MS = 450;

async function boot(): Promise<void> {
  const canvas = document.getElementById("stage") as HTMLCanvasElement;
  const painter = new Painter(canvas);

  const wsUrl = `${location.protocol === "https:" ? "wss" : "ws"}://${location.host}/ws`;
  let bundle: BundleInfo | null = null;
  try {
    bundle = (await (await fetch("/bundle.json")).json()) as BundleInfo;
  } catch {
    /* renders snapshot ids without images */
  }

  let banner: string | null = "connecting…";
  const flashes: FlashState[] = [];
  let dirty = true;

  const headset = new Connection(wsUrl, "headset_sim", {
    onState: () => {
      dirty = true;
    },
    onEffects: (effects) => {
      const now = performance.now();
      for (const e of effects) flashes.push({ effect: e, until: now + FLASH_MS });
      dirty = true;
    },
    onBanner: (text) => {
      banner = text;
      dirty = true;
    },
    onError: (code, message) => console.warn("server error:", code, message),
  });
  const tablet = new Connection(wsUrl, "tablet_sim", {
    onBanner: (text) => {
      banner = text;
      dirty = true;
    },
  });
  headset.open();
  tablet.open();

  const route = (event: InputEvent) => {
    // gaze + attention ride the headset link; pen + gestures the tablet link
    if (event.kind === "gaze" || event.kind === "attention") headset.sendEvent(event);
    else tablet.sendEvent(event);
    dirty = true;
  };
  const mapper = new InputMapper(route);

  const norm = (ev: PointerEvent): [number, number] => {
    const r = canvas.getBoundingClientRect();
    return [(ev.clientX - r.left) / r.width, (ev.clientY - r.top) / r.height];
  };
  canvas.addEventListener("pointermove", (ev) => {
    const [x, y] = norm(ev);
    mapper.pointerMove(x, y, performance.now());
  });
  canvas.addEventListener("pointerdown", (ev) => {
    canvas.setPointerCapture(ev.pointerId);
    const [x, y] = norm(ev);
    mapper.pointerDown(x, y, performance.now());
  });
  canvas.addEventListener("pointerup", (ev) => {
    const [x, y] = norm(ev);
    mapper.pointerUp(x, y, performance.now());
  });
  canvas.addEventListener("pointerleave", () => mapper.pointerLeave(performance.now()));
  window.addEventListener("keydown", (ev) => {
    if (ev.repeat) return;
    mapper.keyDown(ev.key, performance.now());
    if (ev.key === " ") {
      headset.sendRaw(control("start"));
      ev.preventDefault();
    }
  });
  window.addEventListener("keyup", (ev) => mapper.keyUp(ev.key, performance.now()));

  const startButton = document.getElementById("start");
  startButton?.addEventListener("click", () => headset.sendRaw(control("start")));

  function frame(): void {
    const now = performance.now();
    while (flashes.length && flashes[0].until < now) flashes.shift();
    const replica = headset.replica;
    if (replica.state && (dirty || flashes.length)) {
      const released = countReleased(bundle, replica.state.clock_ms);
      mapper.releasedSlides = released;
      const model = buildRenderModel(replica.state, replica.ui, bundle, released);
      painter.draw(model, flashes, banner, now);
      dirty = false;
    }
    requestAnimationFrame(frame);
  }
  requestAnimationFrame(frame);
}

function countReleased(bundle: BundleInfo | null, clockMs: number): number {
  if (!bundle) return 1;
  let n = 0;
  for (const s of bundle.slides) if (s.t_ms <= clockMs) n++;
  return Math.max(n, 1);
}

boot();
