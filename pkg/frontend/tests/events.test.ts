import { describe, expect, it } from 'vitest';

import { EventQueue } from '../src/events.js';
import type { GraphEvent } from '../src/types.js';

function ev(version: number, measures: string[] = []): GraphEvent {
  return { version, 'changed-measures': measures };
}

describe('EventQueue', () => {
  it('applies events ascending even when pushed out of order', () => {
    const applied: number[] = [];
    const q = new EventQueue(0, (e) => applied.push(e.version));
    q.push(ev(5));
    q.push(ev(2));
    q.push(ev(9));
    q.flush();
    expect(applied).toEqual([2, 5, 9]);
    expect(q.version).toBe(9);
  });

  it('drops duplicates and stale replays', () => {
    const applied: number[] = [];
    const q = new EventQueue(0, (e) => applied.push(e.version));
    q.push(ev(3));
    q.flush();
    q.push(ev(3)); // duplicate
    q.push(ev(1)); // stale replay from a reconnect
    q.flush();
    expect(applied).toEqual([3]);
  });

  it('tolerates sparse versions (batches bump more than once)', () => {
    const applied: number[] = [];
    const q = new EventQueue(4, (e) => applied.push(e.version));
    q.push(ev(7)); // batch of 3 mutations after version 4
    q.push(ev(8));
    q.flush();
    expect(applied).toEqual([7, 8]);
  });

  it('fastForward swallows the echo of own mutations', () => {
    const applied: number[] = [];
    const q = new EventQueue(0, (e) => applied.push(e.version));
    q.fastForward(6); // own mutation response said version 6
    q.push(ev(6)); // stream echo
    q.flush();
    expect(applied).toEqual([]);
    expect(q.version).toBe(6);

    q.push(ev(7)); // someone else's later batch still lands
    q.flush();
    expect(applied).toEqual([7]);
  });

  it('fastForward prunes pending events at or below the version', () => {
    const applied: number[] = [];
    const q = new EventQueue(0, (e) => applied.push(e.version));
    q.push(ev(2));
    q.push(ev(5));
    q.fastForward(4);
    q.flush();
    expect(applied).toEqual([5]);
    expect(q.buffered).toBe(0);
  });

  it('drains on a microtask without an explicit flush', async () => {
    const applied: number[] = [];
    const q = new EventQueue(0, (e) => applied.push(e.version));
    q.push(ev(2));
    q.push(ev(1));
    expect(applied).toEqual([]); // nothing synchronously
    await Promise.resolve();
    expect(applied).toEqual([1, 2]);
  });
});
