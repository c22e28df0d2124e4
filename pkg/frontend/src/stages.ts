// Five static pictograms, one per movement stage: simple stick figures that
// read at a glance from across a room.

import type { StageName } from "./protocol.js";

const FIGURES: Record<StageName, string> = {
  // seated: upright torso on a chair
  seated: `
    <circle cx="26" cy="14" r="7"/>
    <path d="M26 21 L26 38 L40 38 L40 52" />
    <path d="M26 38 L26 52" />
    <path d="M14 34 L26 27" />
    <path d="M12 52 L44 52" />`,
  // rising: leaning forward, knees bent
  rising: `
    <circle cx="30" cy="12" r="7"/>
    <path d="M30 19 L24 36 L34 44 L34 54" />
    <path d="M24 36 L18 46 L18 54" />
    <path d="M28 26 L40 32" />`,
  // standing: fully upright
  standing: `
    <circle cx="28" cy="11" r="7"/>
    <path d="M28 18 L28 40" />
    <path d="M28 40 L20 54" />
    <path d="M28 40 L36 54" />
    <path d="M28 24 L16 34" />
    <path d="M28 24 L40 34" />`,
  // lowering: reaching back for the seat
  lowering: `
    <circle cx="24" cy="14" r="7"/>
    <path d="M24 21 L30 36 L30 54" />
    <path d="M30 36 L40 44 L40 54" />
    <path d="M26 27 L40 30" />`,
  // complete: seated with arms raised
  complete: `
    <circle cx="26" cy="14" r="7"/>
    <path d="M26 21 L26 38 L40 38 L40 52" />
    <path d="M26 38 L26 52" />
    <path d="M26 25 L14 14" />
    <path d="M26 25 L38 14" />
    <path d="M12 52 L44 52" />`,
};

export const STAGE_LABELS: Record<StageName, string> = {
  seated: "Seated",
  rising: "Rising",
  standing: "Standing",
  lowering: "Sit back down",
  complete: "Well done!",
};

export function stageSvg(stage: StageName): string {
  return `<svg viewBox="0 0 56 60" role="img" aria-label="${STAGE_LABELS[stage]}"
    fill="none" stroke="currentColor" stroke-width="4" stroke-linecap="round">
    ${FIGURES[stage]}</svg>`;
}
