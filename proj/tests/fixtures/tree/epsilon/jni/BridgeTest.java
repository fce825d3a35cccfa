import org.junit.Test;
import static org.junit.Assert.assertEquals;

public class BridgeTest {
    @Test
    public void testGreet() {
        assertEquals("hello ada", Bridge.greet("ada"));
    }
}
