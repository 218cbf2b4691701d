// Two fixed cue tones. The context factory is injectable because test
// environments have no AudioContext.

import type { CueKind } from './protocol.js';

const FREQ: Record<CueKind, number> = { success: 880, try_again: 220 };
const TONE_S = 0.18;

type CtxFactory = () => AudioContext | null;

let factory: CtxFactory = () =>
  typeof AudioContext === 'undefined' ? null : new AudioContext();
let ctx: AudioContext | null | undefined;

export function setAudioFactory(f: CtxFactory): void {
  factory = f;
  ctx = undefined;
}

// returns the frequency played, or null when audio is unavailable
export function playCue(kind: CueKind): number | null {
  if (ctx === undefined) ctx = factory();
  if (!ctx) return null;
  const osc = ctx.createOscillator();
  const gain = ctx.createGain();
  osc.frequency.value = FREQ[kind];
  gain.gain.setValueAtTime(0.25, ctx.currentTime);
  gain.gain.exponentialRampToValueAtTime(0.001, ctx.currentTime + TONE_S);
  osc.connect(gain);
  gain.connect(ctx.destination);
  osc.start();
  osc.stop(ctx.currentTime + TONE_S);
  return FREQ[kind];
}
