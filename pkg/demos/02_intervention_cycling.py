"""Intervention scheduling walkthrough.

Shows one episode's 3-second on/off cycle, the blinded condition draw,
and the event log that records everything for later replay.
"""
from refocus.events import EventLog
from refocus.scheduling import Scheduler, SchedulerConfig, replay

log = EventLog()
scheduler = Scheduler(SchedulerConfig(treatment_probability=1.0, rng_seed=7), log=log)

episode = scheduler.activate(10.0)
print(f"episode {episode.episode_id}: condition={episode.condition}, "
      f"pattern={episode.pattern.value}")
print()
print("effect over time (x = perturbation on, . = off):")
line = []
for step in range(180):
    t = 10.0 + step * 0.1
    line.append("x" if scheduler.current_effect(t) is not None else ".")
print("".join(line))
print("^ 3 s on, 3 s off, starting enabled at activation")

scheduler.deactivate(27.5)
print()
print("logged events:")
for event in log:
    print(f"  t={event.t:6.1f}  {event.type:18s} {event.payload}")

rebuilt = replay(log.events, scheduler.config)
match = rebuilt.episodes[0].toggle_history == scheduler.episodes[0].toggle_history
print()
print(f"replay from the log reconstructs the toggle history exactly: {match}")

# blinded draws: with probability 0.5 the console's mark starts a control
# episode and the client hears nothing
blinded = Scheduler(SchedulerConfig(treatment_probability=0.5, rng_seed=123))
draws = []
t = 0.0
for _ in range(12):
    e = blinded.activate(t)
    draws.append(e.condition)
    t += 5.0
    blinded.deactivate(t)
    t += 5.0
print()
print(f"12 blinded condition draws (seed 123): {draws}")
