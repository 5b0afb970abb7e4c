package game;

import com.googlecode.objectify.annotation.Entity;
import com.googlecode.objectify.annotation.Id;

@Entity
public class Player {
    @Id Long id;
    String name;
    Integer credits;
}
