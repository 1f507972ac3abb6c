/**
 * Version-ordered event application.
 *
 * The stream contract is at-least-once with strictly increasing versions
 * per committed batch.  Versions are sparse (a batch bumps the graph once
 * per mutation but publishes a single event), so "in order" means
 * ascending, not consecutive.  Events that arrive together are sorted
 * before application; anything at or below the applied version is a
 * duplicate and is dropped.  A reconnecting subscriber passes
 * since=applied so replay fills whatever the old connection missed.
 */

import type { GraphEvent } from './types.js';

export class EventQueue {
  private applied: number;
  private pending = new Map<number, GraphEvent>();
  private drainScheduled = false;
  private readonly apply: (ev: GraphEvent) => void;

  constructor(initialVersion: number, apply: (ev: GraphEvent) => void) {
    this.applied = initialVersion;
    this.apply = apply;
  }

  /** Highest version applied so far; converges to the server's version. */
  get version(): number {
    return this.applied;
  }

  /** Number of events waiting for the next drain. */
  get buffered(): number {
    return this.pending.size;
  }

  push(ev: GraphEvent): void {
    if (ev.version <= this.applied) return; // duplicate or stale replay
    this.pending.set(ev.version, ev);
    if (!this.drainScheduled) {
      this.drainScheduled = true;
      queueMicrotask(() => this.flush());
    }
  }

  /**
   * Mutation responses carry the committed version too; fast-forwarding
   * past them keeps the stream echo from re-applying work the view
   * already reflects.
   */
  fastForward(version: number): void {
    if (version <= this.applied) return;
    this.applied = version;
    for (const v of [...this.pending.keys()]) {
      if (v <= version) this.pending.delete(v);
    }
  }

  /** Apply everything pending, ascending.  Safe to call directly. */
  flush(): void {
    this.drainScheduled = false;
    const versions = [...this.pending.keys()].sort((a, b) => a - b);
    for (const v of versions) {
      const ev = this.pending.get(v);
      if (!ev || v <= this.applied) {
        this.pending.delete(v);
        continue;
      }
      this.pending.delete(v);
      this.applied = v;
      this.apply(ev);
    }
  }
}
