/** Bundled demo scenario documents (verbatim copies of the shipped
 * examples), so the playground works without file access. */

export interface Demo {
  id: string;
  label: string;
  suggestedDevice: string;
  suggestedFoil: string;
  document: unknown;
}

export const DEMOS: Demo[] = [
  {
    id: "lamp",
    label: "Living-room lamp (undesired event)",
    suggestedDevice: "lamp",
    suggestedFoil: "off",
    document: {
      "entities": [
        {
          "id": "lamp",
          "name": "the lamp",
          "domain": [
            "off",
            "on"
          ],
          "controllability": "mutable-non-actionable",
          "phrases": {
            "on": {
              "state": "on",
              "present": "the lamp is on"
            },
            "off": {
              "state": "off",
              "present": "the lamp is off"
            }
          }
        },
        {
          "id": "room",
          "name": "the room",
          "domain": [
            "empty",
            "occupied"
          ],
          "controllability": "actionable",
          "phrases": {
            "empty": {
              "state": "empty",
              "present": "the room is empty",
              "past": "the room had been empty"
            },
            "occupied": {
              "state": "occupied",
              "present": "the room is occupied"
            }
          }
        },
        {
          "id": "sun_set",
          "name": "the sun",
          "domain": [
            "false",
            "true"
          ],
          "controllability": "immutable",
          "phrases": {
            "true": {
              "present": "the sun has set",
              "past": "the sun had set",
              "past_negated": "the sun had not set"
            }
          }
        },
        {
          "id": "weather",
          "name": "the weather",
          "domain": [
            "cloudy",
            "sunny"
          ],
          "controllability": "immutable",
          "phrases": {
            "sunny": {
              "state": "sunny",
              "present": "it is sunny",
              "past": "the weather had been sunny"
            }
          }
        },
        {
          "id": "time",
          "name": "the time",
          "domain": [
            "before_5pm",
            "after_5pm"
          ],
          "controllability": "immutable",
          "phrases": {
            "after_5pm": {
              "present": "it is after 5 p.m.",
              "past_negated": "it had not been after 5 p.m."
            },
            "before_5pm": {
              "past": "the time had been before 5 p.m."
            }
          }
        }
      ],
      "rules": [
        {
          "id": "AR-1",
          "priority": 1,
          "preconditions": [
            {
              "entity": "weather",
              "operator": "equals",
              "value": "sunny"
            }
          ],
          "actions": [
            {
              "entity": "lamp",
              "value": "off"
            }
          ]
        },
        {
          "id": "DR-2",
          "priority": 2,
          "preconditions": [
            {
              "entity": "sun_set",
              "operator": "equals",
              "value": "true"
            }
          ],
          "actions": [
            {
              "entity": "lamp",
              "value": "on"
            }
          ]
        },
        {
          "id": "AR-2",
          "priority": 3,
          "preconditions": [
            {
              "entity": "room",
              "operator": "equals",
              "value": "empty"
            }
          ],
          "actions": [
            {
              "entity": "lamp",
              "value": "off"
            }
          ]
        },
        {
          "id": "DR-1",
          "priority": 4,
          "preconditions": [
            {
              "entity": "time",
              "operator": "equals",
              "value": "after_5pm"
            }
          ],
          "actions": [
            {
              "entity": "lamp",
              "value": "on"
            }
          ]
        }
      ],
      "initial_state": {
        "lamp": "off",
        "room": "empty",
        "sun_set": "false",
        "weather": "cloudy",
        "time": "before_5pm"
      },
      "history": [
        {
          "timestamp": 1000,
          "entity": "room",
          "old_value": "empty",
          "new_value": "occupied",
          "cause": "external"
        },
        {
          "timestamp": 2000,
          "entity": "sun_set",
          "old_value": "false",
          "new_value": "true",
          "cause": "external"
        },
        {
          "timestamp": 2000,
          "entity": "lamp",
          "old_value": "off",
          "new_value": "on",
          "cause": "DR-2"
        },
        {
          "timestamp": 3000,
          "entity": "time",
          "old_value": "before_5pm",
          "new_value": "after_5pm",
          "cause": "external"
        }
      ],
      "clock": 3600000
    },
  },
  {
    id: "meeting-room-door",
    label: "Meeting room door (expected event missing)",
    suggestedDevice: "door",
    suggestedFoil: "open",
    document: {
      "entities": [
        {
          "id": "door",
          "name": "the meeting room door",
          "domain": [
            "locked",
            "open"
          ],
          "controllability": "mutable-non-actionable",
          "phrases": {
            "locked": {
              "state": "locked",
              "present": "the meeting room door is locked"
            },
            "open": {
              "state": "open",
              "present": "the meeting room door is open"
            }
          }
        },
        {
          "id": "time_of_day",
          "name": "the time",
          "domain": [
            "before_8_30",
            "after_8_30"
          ],
          "controllability": "immutable",
          "phrases": {
            "before_8_30": {
              "present": "it is before 8:30 a.m.",
              "past": "it was before 8:30 a.m.",
              "past_negated": "it was not before 8:30 a.m."
            },
            "after_8_30": {
              "present": "it is after 8:30 a.m.",
              "past": "it was not before 8:30 a.m."
            }
          }
        }
      ],
      "rules": [
        {
          "id": "LOCK-EARLY",
          "priority": 1,
          "preconditions": [
            {
              "entity": "time_of_day",
              "operator": "equals",
              "value": "before_8_30"
            }
          ],
          "actions": [
            {
              "entity": "door",
              "value": "locked"
            }
          ]
        },
        {
          "id": "OPEN-DAY",
          "priority": 2,
          "preconditions": [
            {
              "entity": "time_of_day",
              "operator": "equals",
              "value": "after_8_30"
            }
          ],
          "actions": [
            {
              "entity": "door",
              "value": "open"
            }
          ]
        }
      ],
      "initial_state": {
        "door": "locked",
        "time_of_day": "before_8_30"
      },
      "history": [],
      "clock": 28800000
    },
  },
  {
    id: "office-speaker",
    label: "Office speaker (no rule executed)",
    suggestedDevice: "speaker",
    suggestedFoil: "on",
    document: {
      "entities": [
        {
          "id": "speaker",
          "name": "the speaker",
          "domain": [
            "off",
            "on"
          ],
          "controllability": "mutable-non-actionable",
          "phrases": {
            "off": {
              "state": "off",
              "present": "the speaker is off"
            },
            "on": {
              "state": "on",
              "present": "the speaker is on"
            }
          }
        },
        {
          "id": "meeting",
          "name": "the meeting",
          "domain": [
            "none",
            "going_on"
          ],
          "controllability": "actionable",
          "phrases": {
            "none": {
              "present": "no meeting is going on",
              "past": "there was no meeting going on"
            },
            "going_on": {
              "present": "a meeting is going on",
              "past": "a meeting was going on",
              "past_negated": "there was no meeting going on"
            }
          }
        }
      ],
      "rules": [
        {
          "id": "MUSIC-ON",
          "priority": 1,
          "preconditions": [
            {
              "entity": "meeting",
              "operator": "equals",
              "value": "none"
            }
          ],
          "actions": [
            {
              "entity": "speaker",
              "value": "on"
            }
          ]
        }
      ],
      "initial_state": {
        "speaker": "off",
        "meeting": "none"
      },
      "history": [
        {
          "timestamp": 1000,
          "entity": "meeting",
          "old_value": "none",
          "new_value": "going_on",
          "cause": "external"
        }
      ],
      "clock": 600000
    },
  },
];

export function demoById(id: string): Demo {
  const demo = DEMOS.find((d) => d.id === id);
  if (!demo) throw new Error(`unknown demo ${id}`);
  return demo;
}
