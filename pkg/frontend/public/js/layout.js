// Pure geometry for the game screen: phrase boxes laid out left-to-right,
// dependency arcs drawn as plain lines (no arrowheads) above the sentence.
const CHAR_WIDTH = 26;
const PAD = 18;
const GAP = 14;
export function layoutPhrases(surfaces, left = 24, charWidth = CHAR_WIDTH) {
    const boxes = [];
    let x = left;
    surfaces.forEach((surface, i) => {
        const width = surface.length * charWidth + PAD;
        boxes.push({ index: i + 1, x, width, centerX: x + width / 2 });
        x += width + GAP;
    });
    return boxes;
}
// Nesting depth: arcs spanning other arcs draw higher.  Projectivity
// guarantees spans either nest or are disjoint, so resolving short spans
// first gives each arc one level above its tallest inner arc.
export function arcLevels(arcs) {
    const levels = arcs.map(() => 1);
    const bySpan = arcs
        .map((_, i) => i)
        .sort((a, b) => arcs[a][1] - arcs[a][0] - (arcs[b][1] - arcs[b][0]));
    for (const i of bySpan) {
        const [d, h] = arcs[i];
        let tallestInner = 0;
        arcs.forEach(([d2, h2], j) => {
            if (j !== i && d <= d2 && h2 <= h) {
                tallestInner = Math.max(tallestInner, levels[j]);
            }
        });
        levels[i] = tallestInner + 1;
    }
    return levels;
}
// A plain squared-off line from dependent to head: up, across, down.
export function arcPath(fromX, toX, baseY, level, rise = 18) {
    const top = baseY - level * rise;
    return `M ${fromX} ${baseY} L ${fromX} ${top} L ${toX} ${top} L ${toX} ${baseY}`;
}
// Icon position in [-1, +1] -> x pixel between the two walls.
export function iconX(position, leftWallX, rightWallX) {
    const clamped = Math.max(-1, Math.min(1, position));
    const mid = (leftWallX + rightWallX) / 2;
    const half = (rightWallX - leftWallX) / 2;
    return mid + clamped * half;
}
//# sourceMappingURL=layout.js.map