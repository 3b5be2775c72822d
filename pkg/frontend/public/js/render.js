// DOM rendering: sentence on top, built arcs as plain lines above it,
// stack left / queue right of the face icon between the SHIFT and REDUCE
// walls, verdict banner at the end.  Pure function of the view model plus
// the interpolated icon position; no per-arc correctness ever shown.
import { arcLevels, arcPath, iconX, layoutPhrases } from "./layout.js";
const SVG_NS = "http://www.w3.org/2000/svg";
const ARC_BASE_Y = 96;
export function findScreen(root) {
    const get = (id) => {
        const el = root.getElementById(id);
        if (!el)
            throw new Error(`missing element #${id}`);
        return el;
    };
    return {
        arcs: get("arcs"),
        sentence: get("sentence"),
        stack: get("stack"),
        queue: get("queue"),
        icon: get("icon"),
        lane: get("lane"),
        verdict: get("verdict"),
        progress: get("progress"),
    };
}
export function render(screen, view, iconPosition) {
    const boxes = layoutPhrases(view.phrases);
    screen.sentence.replaceChildren(...view.phrases.map((surface, i) => {
        const span = document.createElement("span");
        span.className = "phrase";
        span.textContent = surface;
        span.style.left = `${boxes[i].x}px`;
        span.style.width = `${boxes[i].width}px`;
        return span;
    }));
    const levels = arcLevels(view.arcs);
    const paths = view.arcs.map(([dep, head], i) => {
        const path = document.createElementNS(SVG_NS, "path");
        path.setAttribute("d", arcPath(boxes[dep - 1].centerX, boxes[head - 1].centerX, ARC_BASE_Y, levels[i]));
        path.setAttribute("class", "arc");
        return path;
    });
    screen.arcs.replaceChildren(...paths);
    const width = boxes.length ? boxes[boxes.length - 1].x + boxes[boxes.length - 1].width + 24 : 400;
    screen.arcs.setAttribute("width", String(width));
    screen.sentence.style.width = `${width}px`;
    const surfaceOf = (i) => view.phrases[i - 1] ?? String(i);
    screen.stack.replaceChildren(...view.stack.map((i) => chip(surfaceOf(i), "stack-chip")));
    screen.queue.replaceChildren(...view.queue.map((i) => chip(surfaceOf(i), "queue-chip")));
    const laneWidth = screen.lane.clientWidth || 600;
    const x = iconX(iconPosition, 34, laneWidth - 34);
    screen.icon.style.left = `${x}px`;
    screen.icon.textContent = faceFor(view);
    if (view.verdict) {
        screen.verdict.textContent = view.verdict === "OK" ? "OK - jump for the next one" : "NG - jump for the next one";
        screen.verdict.className = view.verdict === "OK" ? "verdict ok" : "verdict ng";
    }
    else if (view.session_complete) {
        screen.verdict.textContent = "session complete";
        screen.verdict.className = "verdict done";
    }
    else {
        screen.verdict.textContent = "";
        screen.verdict.className = "verdict";
    }
    screen.progress.textContent =
        view.trial_order === null ? "" : `sentence ${view.trial_order} / ${view.trials_total}`;
}
function chip(text, className) {
    const el = document.createElement("span");
    el.className = `chip ${className}`;
    el.textContent = text;
    return el;
}
function faceFor(view) {
    if (view.verdict === "OK")
        return "😀";
    if (view.verdict === "NG")
        return "😵";
    if (view.icon.phase === "AWAIT_JUDGMENT")
        return "🙂";
    return "😐";
}
//# sourceMappingURL=render.js.map